from pipeline.checkpoint import Checkpoint, ResultStore, ReviewLog
from pipeline.config import RunConfig
from pipeline.core import (AbortedRun, ConfigError, ConfigMismatch, CorruptCheckpoint, Job,
                           JobStatus, PipelineError, RunManifest, plan_jobs)
from pipeline.debuglog import DebugLog, read_debug_log
from pipeline.distribution import BalanceReport, verify_distribution, verify_outputs
from pipeline.review import InvalidVerdict, ingest_review, read_verdicts
from pipeline.runner import (assemble, execute_job, execute_jobs, load_manifest, load_run_config,
                             prepare, resume, run)
from pipeline.toxicity import (BlocklistFilter, Decision, KeepAll, apply_filters, build_filter,
                               toxicity_stage)
