""" Per-attempt debug log of a run, one JSON document per line """
import json
import logging

from pathlib import Path

from utils import canonical_json, sha256_text



class JsonLinesFormatter(logging.Formatter):
    def format(self, record):
        if isinstance(record.msg, dict):
            return canonical_json({"ts": round(record.created, 3), **record.msg})
        return canonical_json({"ts": round(record.created, 3), "message": record.getMessage()})


class DebugLog:
    """ Written by the run loop only, workers hand their records back to it """
    def __init__(self, fname):
        self.fname = Path(fname)
        self.fname.parent.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger(f"{__name__}.{self.fname.resolve()}")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self.handler = logging.FileHandler(self.fname, mode='a', encoding="utf-8")
        self.handler.setFormatter(JsonLinesFormatter())
        self.logger.addHandler(self.handler)

    def write(self, record):
        self.logger.debug(record)

    def close(self):
        self.logger.removeHandler(self.handler)
        self.handler.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def attempt_record(job_id, stage, attempt, latency_ms, error=None, result=None):
    return {"job_id": job_id, "stage": stage, "attempt": attempt,
            "latency_ms": round(latency_ms, 3), "outcome": "error" if error else "ok",
            "error": type(error).__name__ if error else None,
            "response": sha256_text(result.text)[:16] if result is not None else None}


def read_debug_log(fname):
    fname = Path(fname)
    if not fname.exists():
        return []
    with open(fname, 'r', encoding="utf-8") as fd:
        records = []
        for line in fd:
            try:
                records.append(json.loads(line))
            except ValueError:
                # Torn by an interruption
                continue
        return records
