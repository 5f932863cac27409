"""
Bringing reviewer decisions back into a run. A verdict is a mapping

    {"job_id": ..., "decision": "accept" | "reject" | "correct", "text": ...}

or `{"sample_id": ..., "decision": "accept" | "reject"}` for samples the content
filter flagged. A correction is stored as a new version of the job result, a
rejection removes the sample from every language.
"""
import json
import logging

from pathlib import Path

from pipeline.checkpoint import Checkpoint, ResultStore, ReviewLog
from pipeline.core import PipelineError, RunManifest
from pipeline.runner import MANIFEST_NAME, assemble, prepare
from utils import load_yaml



logger = logging.getLogger(__name__)

JOB_DECISIONS = ("accept", "reject", "correct")
SAMPLE_DECISIONS = ("accept", "reject")


class InvalidVerdict(PipelineError, ValueError):
    pass


def read_verdicts(fname):
    """ JSON lines, or a YAML list """
    fname = Path(fname)
    if fname.suffix == ".jsonl":
        with open(fname, 'r', encoding="utf-8") as fd:
            return [ json.loads(line) for line in fd if line.strip() ]
    verdicts = load_yaml(fname)
    if not isinstance(verdicts, list):
        raise InvalidVerdict(f"{fname} must hold a list of verdicts.")
    return verdicts


def _review_record(verdict, ckpt, store, sample_ids):
    decision = verdict.get("decision")
    if "job_id" in verdict:
        job_id = verdict["job_id"]
        if decision not in JOB_DECISIONS:
            raise InvalidVerdict(f"Decision on a job must be one of {JOB_DECISIONS}, got {decision!r}.")
        entry = ckpt.completed.get(job_id)
        if entry is None:
            raise InvalidVerdict(f"Job {job_id[:12]} has no result to review.")
        result = None
        if decision == "correct":
            text = verdict.get("text")
            if not text or not str(text).strip():
                raise InvalidVerdict(f"Correction of job {job_id[:12]} has no text.")
            base = store.get(job_id, entry["result"])
            result = store.put(job_id, {**base, "text": str(text), "verdict": "corrected",
                                        "issues": []})
        return {"kind": "job", "key": job_id, "decision": decision, "result": result}
    if "sample_id" in verdict:
        sid = str(verdict["sample_id"])
        if decision not in SAMPLE_DECISIONS:
            raise InvalidVerdict(f"Decision on a sample must be one of {SAMPLE_DECISIONS}, got {decision!r}.")
        if sid not in sample_ids:
            raise InvalidVerdict(f"Sample {sid} is not part of this run.")
        return {"kind": "sample", "key": sid, "decision": decision, "result": None}
    raise InvalidVerdict(f"A verdict names a `job_id` or a `sample_id`: {verdict!r}.")


def ingest_review(config, verdicts):
    """ Apply reviewed verdicts to a finished run and rebuild its outputs and manifest """
    run_dir = config.run_dir
    ckpt = Checkpoint.open(run_dir, config.config_hash())
    store = ResultStore(run_dir)
    plan = prepare(config)
    sample_ids = { s.id for s in plan.samples }
    # Validate everything before logging anything
    records = [ _review_record(v, ckpt, store, sample_ids) for v in verdicts ]
    ReviewLog(run_dir).append(records)
    logger.info("Recorded %d review decision(s) for run %s", len(records), config.run_id)
    fname = run_dir.joinpath(MANIFEST_NAME)
    previous = RunManifest.load(fname) if fname.exists() else None
    manifest = assemble(config, plan, ckpt, previous=previous)
    if previous is not None:
        manifest.wall_time = previous.wall_time
        manifest.provider_stats["checkpoint_seconds"] = \
            previous.provider_stats.get("checkpoint_seconds")
    manifest.save(fname)
    return manifest
