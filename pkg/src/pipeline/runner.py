"""
Batch translation of a dataset into every target language.

Workers only translate. Everything durable (debug log, result store,
checkpoint) is written by the thread running `execute_jobs`, in completion
order. Output files are assembled afterwards in plan order, so they do not
depend on scheduling, interruptions or resumes.
"""
import logging
import statistics
import time

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from tqdm import tqdm

from corpus.languages import SOURCE_LANGUAGE
from corpus.loaders import load_dataset, save_dataset
from corpus.preprocess import apply_translations
from pipeline.checkpoint import LOG_NAME, Checkpoint, ResultStore, ReviewLog, atomic_write
from pipeline.config import RunConfig
from pipeline.core import AbortedRun, CorruptCheckpoint, JobStatus, RunManifest, plan_jobs
from pipeline.debuglog import DebugLog, attempt_record, read_debug_log
from pipeline.toxicity import apply_filters, build_filter
from translation import build_provider
from translation.core import TranslationError, VerificationUnavailable
from translation.retry import RetryPolicy
from translation.verification import translate_with_verification
from utils import canonical_json, file_digest



logger = logging.getLogger(__name__)

CONFIG_NAME = "config.yml"
MANIFEST_NAME = "manifest.json"
DEBUG_NAME = "debug.jsonl"
QUEUE_NAME = "review_queue.jsonl"
OUTPUT_DIR = "output"


@dataclass
class JobOutcome:
    job_id: str
    status: JobStatus
    record: dict | None = None
    attempts: int = 0
    error: str | None = None
    log: list = field(default_factory=list)


@dataclass
class RunPlan:
    samples: list
    jobs: list
    dropped: list = field(default_factory=list)
    flagged: list = field(default_factory=list)


def execute_job(job, provider, retry, theta=0.3, validate=True):
    """ Forward and back translation of one job, never raises on provider errors """
    log, last = [], [time.perf_counter()]

    def on_attempt(stage, request, n, err, result):
        now = time.perf_counter()
        latency = result.latency_ms if result is not None else (now - last[0]) * 1000
        last[0] = now
        log.append(attempt_record(job.job_id, stage, n, latency, err, result))

    def attempts():
        return max( (r["attempt"] for r in log), default=0 )

    text = job.payload.text
    record = {"job_id": job.job_id, "target": job.target, "source": text}
    if not text.strip():
        record.update(text=text, forward=None, back=None, gate_bleu=None,
                      verdict="passthrough", issues=[])
        return JobOutcome(job.job_id, JobStatus.DONE, record)
    try:
        vt = translate_with_verification(text, job.target, provider, theta, job.preamble_id,
                                         retry=retry, on_attempt=on_attempt, validate=validate)
    except VerificationUnavailable as err:
        record.update(text=err.forward.text, forward=err.forward.to_dict(), back=None,
                      gate_bleu=None, verdict="verification_unavailable", issues=[])
        return JobOutcome(job.job_id, JobStatus.FLAGGED, record, attempts(), str(err), log)
    except TranslationError as err:
        return JobOutcome(job.job_id, JobStatus.FAILED, None, attempts(),
                          f"{type(err).__name__}: {err}", log)
    result = vt.to_dict()
    result.pop("attempts")
    record.update(text=vt.forward.text, **result)
    status = JobStatus.FLAGGED if vt.needs_review else JobStatus.DONE
    return JobOutcome(job.job_id, status, record, attempts(), None, log)


def execute_jobs(jobs, provider, checkpoint, store, debug, parallelism=1, checkpoint_every=100,
                 retry=None, theta=0.3, validate=True, progress=False):
    """
    Run every job not in `checkpoint` yet and not already final, each
    distinct job id once. Jobs are updated in place with their status,
    attempts and result hash. Returns (failed outcomes by job id, seconds
    spent writing results and checkpointing).
    An interruption flushes the checkpoint and raises AbortedRun.
    """
    if parallelism < 1 or checkpoint_every < 1:
        raise ValueError("parallelism and checkpoint_every must be at least 1.")
    retry = retry or RetryPolicy()
    todo, planned = {}, {}
    for job in jobs:
        if job.status.final or job.job_id in checkpoint:
            continue
        todo.setdefault(job.job_id, job)
        planned.setdefault(job.job_id, []).append(job)
    failures, spent = {}, 0.0
    pool = ThreadPoolExecutor(max_workers=parallelism)
    bar = tqdm(total=len(todo), desc="Translating", unit="job",
               disable=None if progress else True)
    try:
        futures = []
        for job_id, job in todo.items():
            for j in planned[job_id]:
                j.status = JobStatus.IN_FLIGHT
            futures.append(pool.submit(execute_job, job, provider, retry, theta, validate))
        for fut in as_completed(futures):
            outcome = fut.result()
            for rec in outcome.log:
                debug.write(rec)
            result_hash = None
            if outcome.status is JobStatus.FAILED:
                logger.warning("Job %s failed after %d attempt(s): %s", outcome.job_id[:12],
                               outcome.attempts, outcome.error)
                failures[outcome.job_id] = outcome
            else:
                started = time.perf_counter()
                result_hash = store.put(outcome.job_id, outcome.record)
                checkpoint.record(outcome.job_id, result_hash, outcome.status)
                if checkpoint.pending >= checkpoint_every:
                    checkpoint.flush()
                spent += time.perf_counter() - started
            for j in planned[outcome.job_id]:
                j.status, j.attempts, j.result_hash = (outcome.status, outcome.attempts,
                                                       result_hash)
            bar.update()
    except KeyboardInterrupt:
        pool.shutdown(wait=True, cancel_futures=True)
        checkpoint.flush()
        raise AbortedRun(f"Run {checkpoint.run_id} interrupted with {len(checkpoint)} job(s) "
                         f"checkpointed, resume it to finish.", checkpoint.run_id,
                         len(checkpoint)) from None
    except BaseException:
        pool.shutdown(wait=True, cancel_futures=True)
        checkpoint.flush()
        raise
    finally:
        pool.shutdown(wait=True)
        bar.close()
    started = time.perf_counter()
    checkpoint.flush()
    spent += time.perf_counter() - started
    return failures, spent


def prepare(config):
    """ Load the source, filter it and plan its jobs """
    samples = load_dataset(config.source, SOURCE_LANGUAGE)
    params = dict(config.filter)
    content_filter = build_filter(params.pop("name"), **params)
    kept, dropped, flagged = apply_filters(samples, content_filter)
    return RunPlan(kept, plan_jobs(kept, config.languages, config.preamble_id), dropped, flagged)


def open_checkpoint(config, config_hash, create=True):
    run_dir = config.run_dir
    if run_dir.joinpath(LOG_NAME).exists():
        return Checkpoint.open(run_dir, config_hash)
    if not create:
        raise CorruptCheckpoint(f"Nothing to resume in {run_dir}.")
    ckpt = Checkpoint.create(run_dir, config.run_id, config_hash)
    with open(run_dir.joinpath(CONFIG_NAME), 'w') as fd:
        yaml.safe_dump(config.to_dict(), fd, sort_keys=False, allow_unicode=True)
    return ckpt


def _resolve(job, ckpt, reviews):
    """ (status, result hash) of a job once reviews are applied """
    entry = ckpt.completed.get(job.job_id)
    if entry is None:
        return JobStatus.FAILED, None
    review = reviews.get(("job", job.job_id))
    if review is not None:
        return JobStatus.DONE, review.get("result") or entry["result"]
    return JobStatus(entry["status"]), entry["result"]


def _provider_stats(config, jobs, resolved, records, debug_records):
    stats = {"provider": config.provider.get("name"), "seed": config.seed, "languages": {}}
    for lang in config.languages:
        ids = { j.job_id for j in jobs if j.target == lang and resolved[j.job_id][1] }
        recs = [ records[i] for i in sorted(ids) ]
        gates = [ r["gate_bleu"] for r in recs if r.get("gate_bleu") is not None ]
        lats = [ r["forward"]["latency_ms"] for r in recs if r.get("forward") ]
        stats["languages"][lang] = {
            "jobs": len(ids),
            "mean_gate_bleu": statistics.fmean(gates) if gates else None,
            "mean_latency_ms": statistics.fmean(lats) if lats else None}
    stats["attempts"] = len(debug_records)
    stats["retries"] = sum( 1 for r in debug_records if r.get("attempt", 1) > 1 )
    return stats


def assemble(config, plan, ckpt, failures=None, previous=None):
    """
    Write the outputs of every language, the review queue and the manifest.
    A sample appears in a language only if all its assistant turns were
    translated, it appears nowhere if a reviewer rejected it.
    """
    failures = failures or {}
    previous_failures = { f["job_id"]: f for f in (previous.failures if previous else []) }
    run_dir = config.run_dir
    store = ResultStore(run_dir)
    reviews = ReviewLog(run_dir).latest()

    resolved = { j.job_id: _resolve(j, ckpt, reviews) for j in plan.jobs }
    for job in plan.jobs:
        job.status, job.result_hash = resolved[job.job_id]
    records = { jid: store.get(jid, h) for jid, (_, h) in resolved.items() if h }
    rejected = { key for (kind, key), r in reviews.items()
                 if kind == "sample" and r["decision"] == "reject" }
    rejected |= { j.sample_id for j in plan.jobs
                  if reviews.get(("job", j.job_id), {}).get("decision") == "reject" }
    kept = [ s for s in plan.samples if s.id not in rejected ]
    by_turn = { (j.sample_id, j.payload.turn_index, j.target): j for j in plan.jobs }

    outputs = {SOURCE_LANGUAGE: kept}
    for lang in config.languages:
        translated = []
        for s in kept:
            texts = {}
            for i in s.assistant_indexes:
                jid = by_turn[(s.id, i, lang)].job_id
                if resolved[jid][1] is None:
                    break
                texts[i] = records[jid]["text"]
            else:
                translated.append(apply_translations(s, lang, texts))
        outputs[lang] = translated

    manifest = RunManifest(config.run_id, ckpt.config_hash, config.seed, len(kept), len(plan.jobs))
    for lang, samples in outputs.items():
        fname, count = save_dataset(samples, lang, run_dir.joinpath(OUTPUT_DIR),
                                    config.dataset_stem)
        manifest.counts[lang] = count
        manifest.outputs[lang] = {"path": str(fname.relative_to(run_dir)),
                                  "sha256": file_digest(fname), "count": count}

    users = {}
    for j in plan.jobs:
        users.setdefault(j.job_id, []).append(j.sample_id)
    queue, seen = [], set()
    for job in plan.jobs:
        status, _ = resolved[job.job_id]
        if status is JobStatus.DONE:
            manifest.done += 1
        elif status is JobStatus.FLAGGED:
            manifest.flagged += 1
        else:
            manifest.failed += 1
        if job.job_id in seen:
            continue
        seen.add(job.job_id)
        samples = sorted(set(users[job.job_id]))
        if status is JobStatus.FAILED:
            fail = failures.get(job.job_id)
            error = fail.error if fail else previous_failures.get(job.job_id, {}).get("error")
            manifest.failures.append({"job_id": job.job_id, "target": job.target,
                                      "samples": samples, "error": error,
                                      "attempts": fail.attempts if fail else None})
        elif status is JobStatus.FLAGGED:
            rec = records[job.job_id]
            item = {"kind": "job", "key": job.job_id, "target": job.target, "samples": samples,
                    "verdict": rec.get("verdict"), "gate_bleu": rec.get("gate_bleu"),
                    "issues": rec.get("issues") or []}
            manifest.review.append(item)
            queue.append({**item, "source": rec.get("source"), "forward": rec.get("text"),
                          "back": (rec.get("back") or {}).get("text")})
    for sid in plan.flagged:
        if ("sample", sid) not in reviews and sid not in rejected:
            item = {"kind": "sample", "key": sid, "reason": "content_filter"}
            manifest.review.append(item)
            queue.append(item)
    atomic_write(run_dir.joinpath(QUEUE_NAME),
                 ''.join( canonical_json(q) + '\n' for q in queue ).encode("utf-8"))

    manifest.dropped = list(plan.dropped) + sorted(rejected)
    manifest.provider_stats = _provider_stats(config, plan.jobs, resolved, records,
                                              read_debug_log(run_dir.joinpath(DEBUG_NAME)))
    return manifest


def _run(config, provider, create):
    started = time.perf_counter()
    config_hash = config.config_hash()
    plan = prepare(config)
    ckpt = open_checkpoint(config, config_hash, create)
    logger.info("Run %s: %d job(s) planned for %d sample(s), %d already completed",
                config.run_id, len(plan.jobs), len(plan.samples), len(ckpt))
    pending = sum( 1 for j in plan.jobs if j.job_id not in ckpt )
    owned = provider is None
    if owned:
        params = dict(config.provider)
        provider = build_provider(params.pop("name"), **params)
    try:
        with DebugLog(config.run_dir.joinpath(DEBUG_NAME)) as debug:
            failures, spent = execute_jobs(
                plan.jobs, provider, ckpt, ResultStore(config.run_dir), debug,
                config.parallelism, config.checkpoint_every, RetryPolicy.from_config(config.retry),
                config.theta, config.validate, config.progress)
    finally:
        if owned:
            provider.close()
    manifest = assemble(config, plan, ckpt, failures)
    fname = config.run_dir.joinpath(MANIFEST_NAME)
    if not pending and fname.exists():
        previous = RunManifest.load(fname)
        if previous.outputs == manifest.outputs:
            logger.info("Run %s was already complete, manifest left as is", config.run_id)
            return previous
    manifest.wall_time = time.perf_counter() - started
    manifest.provider_stats["checkpoint_seconds"] = spent
    manifest.save(fname)
    logger.info("Run %s: %d done, %d flagged, %d failed in %.1fs", config.run_id,
                manifest.done, manifest.flagged, manifest.failed, manifest.wall_time)
    return manifest


def run(config, provider=None):
    """ Start a run, or carry on with it if its directory already has a checkpoint """
    return _run(config, provider, create=True)


def resume(config, provider=None):
    """ Carry on with an existing run, ConfigMismatch if its configuration changed """
    return _run(config, provider, create=False)


def load_run_config(run_dir):
    with open(Path(run_dir).joinpath(CONFIG_NAME), 'r') as fd:
        return RunConfig.from_dict(yaml.safe_load(fd))


def load_manifest(run_dir):
    return RunManifest.load(Path(run_dir).joinpath(MANIFEST_NAME))
