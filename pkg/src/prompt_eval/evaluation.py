"""
Preamble tournament: every preamble translates every evaluation pair, per-order
BLEU against the reference is averaged per (preamble, language), and the
preamble with the highest grand mean wins.
"""
import json
import logging

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from tqdm import tqdm

from corpus.languages import SOURCE_LANGUAGE
from prompt_eval.core import EmptyReport, MissingReference
from textmetrics.accumulators import OrderedBleu
from textmetrics.tokenize import tokenize
from translation.core import TranslationError, TranslationRequest
from translation.retry import RetryPolicy



logger = logging.getLogger(__name__)

CELL_COLUMNS = ["preamble_id", "language", "n", "mean_bleu", "pairs"]
RADAR_COLUMNS = ["preamble_id", "n", "mean_bleu"]


@dataclass(frozen=True)
class EvalPair:
    sample_id: str
    source_en: str
    reference: str
    language: str

    def __post_init__(self):
        if self.language == SOURCE_LANGUAGE:
            raise ValueError("Evaluation pairs translate out of English.")
        if not self.reference or not self.reference.strip():
            raise ValueError(f"Empty {self.language} reference for sample {self.sample_id}.")


def build_eval_dataset(selection, references, languages=None):
    """
    One pair per (selected sample, language), language-major.
    `references` maps language to {sample_id: reference text}.
    """
    languages = list(languages if languages is not None else references)
    pairs = []
    for lang in languages:
        refs = references.get(lang) or {}
        for entry in selection.entries:
            ref = refs.get(entry.sample_id)
            if not ref or not str(ref).strip():
                raise MissingReference(entry.sample_id, lang)
            pairs.append(EvalPair(entry.sample_id, entry.text, str(ref), lang))
    return pairs


class PreambleReport:
    """
    Mean BLEU-n per (preamble, language, order), as a table with columns
    `CELL_COLUMNS`. Pairs whose translation failed are listed in `missing`;
    a preamble with any missing pair is not complete.
    """
    def __init__(self, cells=None, missing=()):
        self.cells = pd.DataFrame(cells if cells is not None else [], columns=CELL_COLUMNS)
        self.missing = [ dict(m) for m in missing ]

    def __len__(self):
        return len(self.cells)

    @property
    def empty(self):
        return self.cells.empty

    @property
    def partial(self):
        return bool(self.missing)

    @property
    def preamble_ids(self):
        return sorted( int(i) for i in self.cells["preamble_id"].unique() )

    def complete_ids(self):
        failed = { m["preamble_id"] for m in self.missing }
        return [ i for i in self.preamble_ids if i not in failed ]

    def cell(self, preamble_id, language, n):
        c = self.cells
        row = c[(c.preamble_id == preamble_id) & (c.language == language) & (c.n == n)]
        return None if row.empty else float(row.mean_bleu.iloc[0])

    def grand_means(self):
        """ Unweighted mean over the (language, order) cells of each preamble """
        if self.empty:
            return {}
        means = self.cells.groupby("preamble_id")["mean_bleu"].mean()
        return { int(i): float(m) for i, m in means.items() }

    def to_dict(self):
        return {"cells": self.cells.to_dict(orient="records"), "missing": self.missing}

    @classmethod
    def from_dict(cls, d):
        return cls(d.get("cells") or [], d.get("missing") or [])


def _translate_pair(provider, retry, preamble_id, pair):
    request = TranslationRequest(pair.source_en, SOURCE_LANGUAGE, pair.language, preamble_id)
    result, attempts = retry.call(lambda n: provider.translate(request))
    logger.debug("Preamble %d, %s sample %s: %d attempt(s), %.1f ms", preamble_id,
                 pair.language, pair.sample_id, attempts, result.latency_ms)
    return result.text


def evaluate_preambles(preambles, pairs, provider, parallelism=1, retry=None, max_n=4,
                       progress=False):
    """
    Translate every pair with every preamble and score it against its reference.
    Provider calls run on `parallelism` threads, cells are reduced in input order.
    """
    retry = retry or RetryPolicy()
    provider.add_preambles(preambles)
    tasks = [ (p.id, i, pair) for p in preambles for i, pair in enumerate(pairs) ]
    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        futures = [ pool.submit(_translate_pair, provider, retry, pid, pair)
                    for pid, _, pair in tasks ]
        outputs = []
        for fut in tqdm(futures, desc="Preambles", disable=None if progress else True):
            try:
                outputs.append(fut.result())
            except TranslationError as err:
                outputs.append(err)

    cells, missing, scores = [], [], {}
    for (pid, _, pair), out in zip(tasks, outputs):
        if isinstance(out, Exception):
            logger.warning("Preamble %d on %s sample %s failed: %s", pid, pair.language,
                           pair.sample_id, out)
            missing.append({"preamble_id": pid, "language": pair.language,
                            "sample_id": pair.sample_id, "error": type(out).__name__})
            continue
        acc = scores.setdefault((pid, pair.language), OrderedBleu(max_n))
        acc.update(tokenize(out, pair.language), [tokenize(pair.reference, pair.language)])
    for (pid, lang), acc in scores.items():
        for n, mean in enumerate(acc.compute(), start=1):
            cells.append({"preamble_id": pid, "language": lang, "n": n,
                          "mean_bleu": mean, "pairs": len(acc)})
    return PreambleReport(cells, missing)


def select_best_preamble(report):
    """ Highest grand mean among complete preambles, ties go to the lowest id """
    means = report.grand_means()
    complete = [ i for i in report.complete_ids() if i in means ]
    if not complete:
        raise EmptyReport("No preamble was evaluated on every pair.")
    return min(complete, key=lambda i: (-means[i], i))


def export_radar_data(report, fname=None):
    """ Cross-language mean per (preamble, order), written as CSV if `fname` """
    if report.empty:
        raise EmptyReport("Nothing to export, the report is empty.")
    radar = report.cells.groupby(["preamble_id", "n"], as_index=False)["mean_bleu"].mean()
    radar = radar.sort_values(["preamble_id", "n"]).reset_index(drop=True)[RADAR_COLUMNS]
    if fname is not None:
        Path(fname).parent.mkdir(parents=True, exist_ok=True)
        radar.to_csv(fname, index=False)
    return radar


def summarize_report(report):
    lines = []
    for pid, cells in report.cells.groupby("preamble_id"):
        lines.append(f"preamble {int(pid)}: {cells.mean_bleu.mean():.4f} "
                     f"± {cells.mean_bleu.std(ddof=0):.4f} ({len(cells)} cells)")
    if report.partial:
        lines.append(f"{len(report.missing)} pair(s) missing, report is partial")
    return lines


def save_report(report, fname):
    fname = Path(fname)
    fname.parent.mkdir(parents=True, exist_ok=True)
    with open(fname, 'w') as fd:
        json.dump(report.to_dict(), fd, indent=2, ensure_ascii=False)
    return fname


def load_report(fname):
    with open(fname, 'r') as fd:
        return PreambleReport.from_dict(json.load(fd))
