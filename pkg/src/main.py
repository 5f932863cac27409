import click as cli
import json
import logging
import sys
import wandb

from copy import deepcopy
from functools import wraps
from pathlib import Path

from corpus import CorpusError, UnknownLanguage, dataset_stats, extract_assistant_payloads, load_dataset
from pipeline import (AbortedRun, ConfigError, ConfigMismatch, CorruptCheckpoint, InvalidVerdict,
                      RunConfig, ingest_review, load_manifest, load_run_config, read_verdicts,
                      resume, run, verify_outputs)
from prompt_eval import (PromptEvalError, build_eval_dataset, draft_references, evaluate_preambles,
                         export_radar_data, load_preambles, load_report, read_references,
                         save_report, select_best_preamble, summarize_report, write_references)
from sampling import (build_selection, compute_metric_vectors, read_selection,
                      representative_payloads, select_diverse, write_selection)
from translation import RetryPolicy, TranslationError, build_provider
from utils import canonical_json, init_tracking, load_yaml, rec_update




CONFIG_DIR = Path(__file__).resolve().parents[1].joinpath("config")
# Commands sharing the defaults of another one
_DEFAULTS = {"resume": "translate", "review": "translate", "verify": "translate"}
# Errors that mean the input or the configuration is wrong
_USAGE_ERRORS = (CorpusError, UnknownLanguage, ConfigError, ConfigMismatch, CorruptCheckpoint,
                 PromptEvalError, InvalidVerdict, FileNotFoundError)

logger = logging.getLogger("main")



def emit(summary):
    """ The machine readable result of a command, alone on stdout """
    cli.echo(json.dumps(summary, indent=2, ensure_ascii=False, default=str))


def exits_on_errors(cmd):
    """ Exit 2 on usage, config or parse errors, 1 when a run could not finish """
    @wraps(cmd)
    def wrapper(*args, **kwargs):
        try:
            return cmd(*args, **kwargs)
        except _USAGE_ERRORS as err:
            logger.error("%s: %s", type(err).__name__, err)
            sys.exit(2)
        except (AbortedRun, TranslationError) as err:
            logger.error("%s: %s", type(err).__name__, err)
            sys.exit(1)
    return wrapper


def _provider(config, name=None):
    params = deepcopy(config.get("provider") or {"name": "echo"})
    if name is not None and name != params.get("name"):
        params = {"name": name}
    return build_provider(params.pop("name"), **params)


def _require(config, key):
    if config.get(key) is None:
        raise ConfigError(f"`{key}` is missing from the configuration.")
    return config[key]


def _languages(value):
    return [ c.strip() for c in value.split(',') if c.strip() ] if value else None



@cli.group(context_settings={"help_option_names": ["-h", "--help"]})
@cli.option("-c", "--config-file", "--config", type=cli.Path(exists=True), default=None,
            help="YML to configure called command.")
@cli.option("-v", "--verbose", is_flag=True, help="Debug logs on stderr.")
@cli.option("-q", "--quiet", is_flag=True, help="Warnings only, no progress bars.")
@cli.pass_context
def main(ctx, config_file, verbose, quiet):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    name = _DEFAULTS.get(ctx.invoked_subcommand, ctx.invoked_subcommand)
    default = CONFIG_DIR.joinpath(f"default-{name}.yml")
    full_config = load_yaml(default) if default.exists() else {}
    user_config = load_yaml(config_file) if config_file else {}
    full_config = rec_update(full_config, deepcopy(user_config))
    if quiet:
        full_config["progress"] = False
    ctx.obj = {"config": full_config, "user_config": user_config}


@main.command(name="ingest", short_help="Parse a dataset and print its statistics.")
@cli.argument("path", type=cli.Path(exists=True, dir_okay=False))
@exits_on_errors
def ingest(path):
    """ Parse a LLaVA pretrain JSON file and report counts and anomalies """
    samples = load_dataset(path)
    stats = dataset_stats(samples)
    logger.info("%d samples", stats.samples)
    emit(stats.to_dict())


@main.command(name="sample", short_help="Pick diverse English samples.")
@cli.option("--source", type=cli.Path(exists=True, dir_okay=False), default=None)
@cli.option("--k", type=cli.IntRange(min=0), default=None, help="How many samples.")
@cli.option("--seed", type=int, default=None)
@cli.option("-o", "--output", type=cli.Path(dir_okay=False), default=None,
            help="Selection manifest (YML).")
@cli.pass_context
@exits_on_errors
def sample(ctx, source, k, seed, output):
    """ Maximin selection over length and readability metrics of the GPT answers """
    config = ctx.obj["config"]
    source = source or config.get("source")
    if not source:
        raise ConfigError("No source dataset, give --source or `source` in config.")
    k = config.get("k", 30) if k is None else k
    seed = config.get("seed", 0) if seed is None else seed
    output = output or config.get("output", "selection.yml")
    payloads = representative_payloads(extract_assistant_payloads(load_dataset(source)))
    skipped = []
    vectors = compute_metric_vectors(payloads, skipped)
    ids = select_diverse(vectors, k, seed)
    selection = build_selection(ids, vectors, payloads, k, seed, skipped)
    write_selection(selection, output)
    emit({"k": k, "seed": seed, "selected": selection.ids, "skipped": skipped,
          "output": str(output)})


@main.command(name="eval-preambles", short_help="Preamble tournament.")
@cli.option("--preambles-dir", type=cli.Path(exists=True, file_okay=False), default=None)
@cli.option("--selection", type=cli.Path(exists=True, dir_okay=False), default=None)
@cli.option("--pairs", "references", type=cli.Path(exists=True, dir_okay=False), default=None,
            help="Reference translations (YML, language -> sample id -> text).")
@cli.option("--provider", default=None, help="Provider name, overrides the config.")
@cli.option("--languages", default=None, help="Comma separated target languages.")
@cli.option("--export", type=cli.Path(dir_okay=False), default=None, help="Radar CSV.")
@cli.option("--report", type=cli.Path(dir_okay=False), default=None, help="Report JSON.")
@cli.option("--parallelism", type=cli.IntRange(min=1), default=None)
@cli.pass_context
@exits_on_errors
def eval_preambles(ctx, preambles_dir, selection, references, provider, languages, export,
                   report, parallelism):
    """ Score every preamble by per-order BLEU and print the winner """
    config = ctx.obj["config"]
    preambles = load_preambles(preambles_dir or _require(config, "preambles_dir"))
    selection = read_selection(selection or _require(config, "selection"))
    references = read_references(references or _require(config, "references"))
    pairs = build_eval_dataset(selection, references,
                               _languages(languages) or config.get("languages"))
    tracker = init_tracking(config.get("tracking"), "eval-preambles", config)
    with _provider(config, provider) as prov:
        result = evaluate_preambles(preambles, pairs, prov,
                                    parallelism or config.get("parallelism", 1),
                                    RetryPolicy.from_config(config.get("retry")),
                                    progress=config.get("progress", True))
    for line in summarize_report(result):
        logger.info(line)
    report = report or config.get("report")
    if report:
        save_report(result, report)
    export = export or config.get("export")
    if export:
        export_radar_data(result, export)
    best = select_best_preamble(result)
    if tracker is not None:
        tracker.log({"best_preamble": best, "radar": wandb.Table(dataframe=export_radar_data(result)),
                     **{ f"grand_mean/{i}": m for i, m in result.grand_means().items() }})
        tracker.finish()
    emit({"best": best, "grand_means": result.grand_means(), "pairs": len(pairs),
          "partial": result.partial, "missing": result.missing, "report": report,
          "radar": export})
    if result.partial:
        sys.exit(1)


@main.command(name="export-radar", short_help="Radar chart data of a saved report.")
@cli.option("--report", type=cli.Path(exists=True, dir_okay=False), required=True)
@cli.option("-o", "--output", type=cli.Path(dir_okay=False), required=True)
@exits_on_errors
def export_radar(report, output):
    radar = export_radar_data(load_report(report), output)
    emit({"rows": len(radar), "output": str(output)})


@main.command(name="draft-references", short_help="Draft reference translations.")
@cli.option("--selection", type=cli.Path(exists=True, dir_okay=False), default=None)
@cli.option("--languages", default=None, help="Comma separated target languages.")
@cli.option("--provider", default=None, help="Provider name, overrides the config.")
@cli.option("--theta", type=cli.FloatRange(0, 1), default=None)
@cli.option("-o", "--output", type=cli.Path(dir_okay=False), default=None)
@cli.pass_context
@exits_on_errors
def draft_refs(ctx, selection, languages, provider, theta, output):
    """ Forward and back translation of the selection, drafts to review are queued """
    config = ctx.obj["config"]
    selection = read_selection(selection or _require(config, "selection"))
    languages = _languages(languages) or _require(config, "languages")
    theta = config.get("theta", 0.3) if theta is None else theta
    output = Path(output or config.get("output", "references.yml"))
    with _provider(config, provider) as prov:
        if config.get("preambles_dir"):
            prov.add_preambles(load_preambles(config["preambles_dir"]))
        references, queue = draft_references(selection, languages, prov, theta,
                                             config.get("preamble_id", 0),
                                             RetryPolicy.from_config(config.get("retry")))
    write_references(references, output)
    queue_file = output.with_suffix(".review.jsonl")
    with open(queue_file, 'w', encoding="utf-8") as fd:
        fd.writelines( canonical_json(q) + '\n' for q in queue )
    emit({"output": str(output), "review_queue": str(queue_file), "to_review": len(queue)})


def _run_summary(manifest):
    return {"run_id": manifest.run_id, "balanced": manifest.balanced,
            "counts": manifest.counts, "planned": manifest.planned, "done": manifest.done,
            "flagged": manifest.flagged, "failed": manifest.failed,
            "failures": manifest.failures, "dropped": manifest.dropped,
            "wall_time": round(manifest.wall_time, 3), "seed": manifest.seed,
            "outputs": manifest.outputs}


def _finish(manifest, tracker=None):
    if tracker is not None:
        tracker.log({"done": manifest.done, "flagged": manifest.flagged,
                     "failed": manifest.failed, "wall_time": manifest.wall_time})
        tracker.finish()
    emit(_run_summary(manifest))
    if not manifest.success:
        sys.exit(1)


def _execution_overrides(config, parallelism, checkpoint_every):
    if parallelism is not None:
        config["parallelism"] = parallelism
    if checkpoint_every is not None:
        config["checkpoint_every"] = checkpoint_every
    return config


@main.command(name="translate", short_help="Translate a dataset in every language.")
@cli.option("--source", type=cli.Path(exists=True, dir_okay=False), default=None)
@cli.option("--run-id", default=None)
@cli.option("--provider", default=None, help="Provider name, overrides the config.")
@cli.option("--languages", default=None, help="Comma separated target languages.")
@cli.option("--parallelism", type=cli.IntRange(min=1), default=None)
@cli.option("--checkpoint-every", type=cli.IntRange(min=1), default=None)
@cli.pass_context
@exits_on_errors
def translate(ctx, source, run_id, provider, languages, parallelism, checkpoint_every):
    """ The batch run: plan, translate, verify, checkpoint and write outputs """
    config = _execution_overrides(deepcopy(ctx.obj["config"]), parallelism, checkpoint_every)
    if source:
        config["source"] = source
    if config.get("source"):
        config["source"] = str(Path(config["source"]).resolve())
    if run_id:
        config["run_id"] = run_id
    if provider:
        config["provider"] = {"name": provider}
    if languages:
        config["languages"] = _languages(languages)
    rconfig = RunConfig.from_dict(config)
    tracker = init_tracking(rconfig.tracking, "translate", rconfig.to_dict())
    _finish(run(rconfig), tracker)


@main.command(name="resume", short_help="Finish an interrupted run.")
@cli.option("--run-id", required=True)
@cli.option("--runs-dir", type=cli.Path(file_okay=False), default=None)
@cli.option("--parallelism", type=cli.IntRange(min=1), default=None)
@cli.option("--checkpoint-every", type=cli.IntRange(min=1), default=None)
@cli.pass_context
@exits_on_errors
def resume_run(ctx, run_id, runs_dir, parallelism, checkpoint_every):
    """ Completed jobs are kept, a changed configuration is refused """
    runs_dir = runs_dir or ctx.obj["config"].get("runs_dir", "runs")
    config = load_run_config(Path(runs_dir).joinpath(run_id)).to_dict()
    # Only what the user explicitly asks for changes, the config hash tells if it may
    config = rec_update(config, deepcopy(ctx.obj["user_config"]))
    config = _execution_overrides(config, parallelism, checkpoint_every)
    config.update(run_id=run_id, runs_dir=runs_dir)
    if ctx.obj["config"].get("progress") is False:
        config["progress"] = False
    rconfig = RunConfig.from_dict(config)
    tracker = init_tracking(rconfig.tracking, "resume", rconfig.to_dict())
    _finish(resume(rconfig), tracker)


@main.command(name="verify", short_help="Check balance and output files of a run.")
@cli.option("--run-id", required=True)
@cli.option("--runs-dir", type=cli.Path(file_okay=False), default=None)
@cli.pass_context
@exits_on_errors
def verify(ctx, run_id, runs_dir):
    """ Counts per language, output hashes and a recount of every output file """
    run_dir = Path(runs_dir or ctx.obj["config"].get("runs_dir", "runs")).joinpath(run_id)
    manifest = load_manifest(run_dir)
    report = verify_outputs(manifest, run_dir)
    gates = { lang: s.get("mean_gate_bleu")
              for lang, s in manifest.provider_stats.get("languages", {}).items() }
    emit({**report.to_dict(), "mean_gate_bleu": gates, "failures": len(manifest.failures),
          "to_review": len(manifest.review)})
    if not report.passed:
        sys.exit(1)


@main.command(name="review", short_help="Apply reviewed verdicts to a run.")
@cli.option("--run-id", required=True)
@cli.option("--runs-dir", type=cli.Path(file_okay=False), default=None)
@cli.option("--verdicts", type=cli.Path(exists=True, dir_okay=False), required=True,
            help="JSON lines or YML list of verdicts.")
@cli.pass_context
@exits_on_errors
def review(ctx, run_id, runs_dir, verdicts):
    runs_dir = runs_dir or ctx.obj["config"].get("runs_dir", "runs")
    config = RunConfig.from_dict({**load_run_config(Path(runs_dir).joinpath(run_id)).to_dict(),
                                  "runs_dir": runs_dir, "run_id": run_id})
    _finish(ingest_review(config, read_verdicts(verdicts)))



if __name__ == "__main__":
    main()
