"""
Durable state of a run.

`checkpoint.jsonl` is an append-only log: a header naming the run and its
config hash, then batches of completed jobs, each batch closed by a seal
record `{"type": "seal", "sequence", "count", "digest"}`. The digest chains
every entry written so far. Entries after the last seal were never committed
and are discarded on reopen. `HEAD.json` points at the last seal and is
replaced atomically.

Results live in a content-addressed store, `results/<job_id>/<sha256>.json`.
A file is never rewritten, a corrected result is a new version next to it.
"""
import json
import logging
import os
import tempfile
import time

from pathlib import Path

from pipeline.core import ConfigMismatch, CorruptCheckpoint, JobStatus
from utils import canonical_json, sha256_obj, sha256_text



logger = logging.getLogger(__name__)

LOG_NAME = "checkpoint.jsonl"
HEAD_NAME = "HEAD.json"
GENESIS = sha256_text('')


def _chain(digest, entry):
    return sha256_text(digest + canonical_json(entry))


def atomic_write(fname, data, fsync=True):
    """ Bytes to `fname` through a temp file in the same directory and a rename """
    fname = Path(fname)
    fname.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=fname.parent, prefix=f".{fname.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as out:
            out.write(data)
            out.flush()
            if fsync:
                os.fsync(out.fileno())
        os.replace(tmp, fname)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return fname


class Checkpoint:
    def __init__(self, run_dir, run_id, config_hash):
        self.run_dir = Path(run_dir)
        self.run_id = run_id
        self.config_hash = config_hash
        self.sequence = 0
        self.digest = GENESIS
        # job_id -> {"status", "result"}
        self.completed = {}
        self._pending = []

    @property
    def log_path(self):
        return self.run_dir.joinpath(LOG_NAME)

    @property
    def head_path(self):
        return self.run_dir.joinpath(HEAD_NAME)

    def __len__(self):
        return len(self.completed)

    def __contains__(self, job_id):
        return job_id in self.completed

    @classmethod
    def create(cls, run_dir, run_id, config_hash):
        ckpt = cls(run_dir, run_id, config_hash)
        ckpt.run_dir.mkdir(parents=True, exist_ok=True)
        if ckpt.log_path.exists():
            raise FileExistsError(f"{ckpt.log_path} already exists, resume the run instead.")
        header = {"type": "header", "run_id": run_id, "config_hash": config_hash}
        with open(ckpt.log_path, "wb") as fd:
            fd.write((canonical_json(header) + '\n').encode("utf-8"))
            fd.flush()
            os.fsync(fd.fileno())
        ckpt._write_head()
        return ckpt

    @classmethod
    def open(cls, run_dir, config_hash=None):
        """ Replay the log up to its last seal. Raises ConfigMismatch if `config_hash` differs """
        run_dir = Path(run_dir)
        log_path = run_dir.joinpath(LOG_NAME)
        if not log_path.exists():
            raise CorruptCheckpoint(f"No checkpoint log in {run_dir}.")
        with open(log_path, "rb") as fd:
            lines = fd.read().split(b'\n')
        try:
            header = json.loads(lines[0])
            ckpt = cls(run_dir, header["run_id"], header["config_hash"])
        except (ValueError, KeyError, TypeError):
            raise CorruptCheckpoint(f"{log_path} has no valid header.") from None
        offset = ckpt._replay(lines)
        ckpt._check_head()
        if config_hash is not None and config_hash != ckpt.config_hash:
            raise ConfigMismatch(f"Run {ckpt.run_id} was started with config {ckpt.config_hash[:12]}, "
                                 f"current config is {config_hash[:12]}.")
        if offset < log_path.stat().st_size:
            # Written after the last seal, never committed
            logger.info("Discarding uncommitted tail of %s", log_path)
            with open(log_path, "r+b") as fd:
                fd.truncate(offset)
        return ckpt

    def _replay(self, lines):
        """ Returns the byte offset where the last seal ends """
        size = sum( len(l) + 1 for l in lines ) - 1
        offset = len(lines[0]) + 1
        last_offset = min(offset, size)
        pending, digest = [], self.digest
        for i, raw in enumerate(lines[1:], start=1):
            offset += len(raw) + 1
            if not raw.strip():
                continue
            try:
                rec = json.loads(raw)
                kind = rec["type"]
            except (ValueError, KeyError, TypeError):
                if i >= len(lines) - 2:
                    # Torn last write
                    break
                raise CorruptCheckpoint(f"Line {i + 1} of {self.log_path} is not a record.") from None
            if kind == "seal":
                if rec.get("sequence") != self.sequence + 1:
                    raise CorruptCheckpoint(f"Seal {rec.get('sequence')} follows seal {self.sequence}.")
                for entry in pending:
                    self.completed[entry["job_id"]] = {"status": entry["type"],
                                                       "result": entry["result"]}
                if rec.get("count") != len(self.completed) or rec.get("digest") != digest:
                    raise CorruptCheckpoint(f"Seal {rec['sequence']} does not match its entries.")
                self.sequence, self.digest = rec["sequence"], digest
                pending = []
                last_offset = min(offset, size)
            elif kind in (JobStatus.DONE.value, JobStatus.FLAGGED.value):
                if "job_id" not in rec or "result" not in rec:
                    raise CorruptCheckpoint(f"Line {i + 1} of {self.log_path} misses fields.")
                entry = {"type": kind, "job_id": rec["job_id"], "result": rec["result"]}
                digest = _chain(digest, entry)
                pending.append(entry)
            else:
                raise CorruptCheckpoint(f"Unknown record type {kind!r} on line {i + 1}.")
        return last_offset

    def _check_head(self):
        try:
            with open(self.head_path, 'r') as fd:
                head = json.load(fd)
        except FileNotFoundError:
            if self.sequence == 0:
                return
            raise CorruptCheckpoint(f"No {HEAD_NAME} in {self.run_dir}.") from None
        except ValueError:
            raise CorruptCheckpoint(f"{self.head_path} is not valid JSON.") from None
        if head.get("run_id") != self.run_id or head.get("config_hash") != self.config_hash:
            raise CorruptCheckpoint(f"{self.head_path} belongs to another run.")
        # HEAD is replaced after the log is synced, it can only lag behind by one seal
        if head.get("sequence", 0) > self.sequence or head.get("sequence", 0) < self.sequence - 1:
            raise CorruptCheckpoint(f"{self.head_path} points at seal {head.get('sequence')}, "
                                    f"log ends at seal {self.sequence}.")
        if head.get("sequence") == self.sequence and head.get("digest") != self.digest:
            raise CorruptCheckpoint(f"{self.head_path} digest does not match the log.")

    def _write_head(self):
        head = {"run_id": self.run_id, "config_hash": self.config_hash,
                "sequence": self.sequence, "count": len(self.completed),
                "digest": self.digest, "updated": time.time()}
        atomic_write(self.head_path, json.dumps(head, indent=2).encode("utf-8"))

    def record(self, job_id, result_hash, status=JobStatus.DONE):
        """ Buffer a completion, it is durable once `flush` returns """
        status = JobStatus(status)
        if status not in (JobStatus.DONE, JobStatus.FLAGGED):
            raise ValueError(f"Only done or flagged jobs are checkpointed, not {status.value}.")
        if job_id in self.completed or any( e["job_id"] == job_id for e in self._pending ):
            return False
        self._pending.append({"type": status.value, "job_id": job_id, "result": result_hash})
        return True

    @property
    def pending(self):
        return len(self._pending)

    def flush(self):
        """ Append buffered entries and a seal, then move HEAD. Returns entries written """
        if not self._pending:
            return 0
        digest, lines = self.digest, []
        for entry in self._pending:
            digest = _chain(digest, entry)
            lines.append(canonical_json({**entry, "ts": round(time.time(), 3)}))
        count = len(self.completed) + len(self._pending)
        seal = {"type": "seal", "sequence": self.sequence + 1, "count": count, "digest": digest}
        lines.append(canonical_json(seal))
        with open(self.log_path, "ab") as fd:
            fd.write(('\n'.join(lines) + '\n').encode("utf-8"))
            fd.flush()
            os.fsync(fd.fileno())
        for entry in self._pending:
            self.completed[entry["job_id"]] = {"status": entry["type"], "result": entry["result"]}
        nb = len(self._pending)
        self._pending = []
        self.sequence, self.digest = seal["sequence"], digest
        self._write_head()
        logger.debug("Checkpoint seal %d, %d jobs completed", self.sequence, count)
        return nb


class ResultStore:
    def __init__(self, run_dir):
        self.root = Path(run_dir).joinpath("results")

    def path(self, job_id, result_hash):
        return self.root.joinpath(job_id, f"{result_hash}.json")

    def put(self, job_id, record):
        """ Store a result version, returns its content hash """
        result_hash = sha256_obj(record)
        fname = self.path(job_id, result_hash)
        if not fname.exists():
            # Not synced, only the checkpoint log and HEAD are
            atomic_write(fname, canonical_json(record).encode("utf-8"), fsync=False)
        return result_hash

    def get(self, job_id, result_hash):
        fname = self.path(job_id, result_hash)
        try:
            with open(fname, "rb") as fd:
                data = fd.read()
        except FileNotFoundError:
            raise CorruptCheckpoint(f"Result {result_hash[:12]} of job {job_id[:12]} is missing.") from None
        record = json.loads(data.decode("utf-8"))
        if sha256_obj(record) != result_hash:
            raise CorruptCheckpoint(f"Result {fname} does not match its hash.")
        return record

    def versions(self, job_id):
        return sorted( p.stem for p in self.root.joinpath(job_id).glob("*.json") )


class ReviewLog:
    """
    Reviewer decisions, appended in `reviews.jsonl`. The latest decision about a
    job or a sample wins.
    """
    NAME = "reviews.jsonl"

    def __init__(self, run_dir):
        self.fname = Path(run_dir).joinpath(self.NAME)

    def append(self, records):
        if not records:
            return 0
        data = ''.join( canonical_json({**r, "ts": round(time.time(), 3)}) + '\n' for r in records )
        with open(self.fname, "ab") as fd:
            fd.write(data.encode("utf-8"))
            fd.flush()
            os.fsync(fd.fileno())
        return len(records)

    def latest(self):
        """ {(kind, key): record} with kind `job` or `sample` """
        if not self.fname.exists():
            return {}
        out = {}
        with open(self.fname, 'r', encoding="utf-8") as fd:
            for line in fd:
                try:
                    rec = json.loads(line)
                except ValueError:
                    continue
                out[(rec["kind"], rec["key"])] = rec
        return out
