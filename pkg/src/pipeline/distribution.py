from dataclasses import dataclass, field
from pathlib import Path

from corpus.loaders import load_dataset
from utils import file_digest



@dataclass
class BalanceReport:
    passed: bool
    expected: int
    counts: dict
    # language -> how many samples it lacks
    deficits: dict = field(default_factory=dict)
    # language -> problem with its output file
    mismatches: dict = field(default_factory=dict)

    def to_dict(self):
        return {"passed": self.passed, "expected": self.expected, "counts": self.counts,
                "deficits": self.deficits, "mismatches": self.mismatches}


def verify_distribution(manifest):
    """ Every language must hold as many samples as the English source """
    deficits = { lang: manifest.source_count - c for lang, c in manifest.counts.items()
                 if c != manifest.source_count }
    return BalanceReport(not deficits, manifest.source_count, dict(manifest.counts), deficits)


def verify_outputs(manifest, run_dir):
    """ Balance, plus output files checked against their recorded hash and recounted """
    report = verify_distribution(manifest)
    counts = {}
    for lang, out in manifest.outputs.items():
        fname = Path(run_dir).joinpath(out["path"])
        if not fname.exists():
            report.mismatches[lang] = "missing"
            continue
        if file_digest(fname) != out["sha256"]:
            report.mismatches[lang] = "sha256"
            continue
        counts[lang] = len(load_dataset(fname, lang))
        if counts[lang] != manifest.counts.get(lang):
            report.mismatches[lang] = "count"
    for lang in manifest.counts:
        if lang not in manifest.outputs:
            report.mismatches[lang] = "missing"
    report.counts = { **report.counts, **counts }
    report.passed = report.passed and not report.mismatches
    return report
