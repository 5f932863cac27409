import json

from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path

from corpus.languages import SOURCE_LANGUAGE, check_targets
from corpus.loaders import extract_assistant_payloads
from translation.core import request_id



class PipelineError(Exception):
    pass

class ConfigError(PipelineError, ValueError):
    pass

class ConfigMismatch(PipelineError):
    """ The run directory was started with another configuration """

class CorruptCheckpoint(PipelineError):
    pass

class AbortedRun(PipelineError):
    """ Interrupted, the checkpoint left behind is valid for `resume` """
    def __init__(self, message, run_id=None, completed=0):
        super(AbortedRun, self).__init__(message)
        self.run_id = run_id
        self.completed = completed


class JobStatus(str, Enum):
    PENDING = "pending"
    IN_FLIGHT = "in_flight"
    DONE = "done"
    FAILED = "failed"
    FLAGGED = "flagged"

    @property
    def final(self):
        return self in (JobStatus.DONE, JobStatus.FAILED, JobStatus.FLAGGED)


@dataclass
class Job:
    """
    Translation of one assistant payload into one target language. The id is
    the request content hash: the same text planned twice is translated once.
    """
    payload: object
    target: str
    preamble_id: int = 0
    status: JobStatus = JobStatus.PENDING
    attempts: int = 0
    result_hash: str | None = None
    job_id: str = ''

    def __post_init__(self):
        if not self.job_id:
            self.job_id = request_id(self.payload.text, SOURCE_LANGUAGE, self.target,
                                     self.preamble_id)

    @property
    def sample_id(self):
        return self.payload.sample_id


def plan_jobs(samples, targets, preamble_id=0):
    """ Jobs ordered by sample, then assistant turn, then language """
    targets = check_targets(targets)
    return [ Job(payload, lang, preamble_id)
             for payload in extract_assistant_payloads(samples) for lang in targets ]


@dataclass
class RunManifest:
    run_id: str
    config_hash: str = ''
    seed: int = 0
    source_count: int = 0
    planned: int = 0
    done: int = 0
    failed: int = 0
    flagged: int = 0
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    review: list = field(default_factory=list)
    dropped: list = field(default_factory=list)
    provider_stats: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def conserved(self):
        return self.done + self.failed + self.flagged == self.planned

    @property
    def balanced(self):
        return all( c == self.source_count for c in self.counts.values() )

    @property
    def success(self):
        return self.balanced and not self.failures

    def to_dict(self):
        return {**asdict(self), "balanced": self.balanced}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d.pop("balanced", None)
        return cls(**d)

    def save(self, fname):
        fname = Path(fname)
        tmp = fname.with_name(f".{fname.name}.tmp")
        with open(tmp, 'w') as fd:
            json.dump(self.to_dict(), fd, indent=2, ensure_ascii=False)
        tmp.replace(fname)
        return fname

    @classmethod
    def load(cls, fname):
        with open(fname, 'r') as fd:
            return cls.from_dict(json.load(fd))
