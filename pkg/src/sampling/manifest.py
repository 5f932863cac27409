import yaml

from dataclasses import dataclass, field
from pathlib import Path

from sampling.vectors import METRICS, MetricVector



@dataclass(frozen=True)
class SelectionEntry:
    sample_id: str
    text: str
    vector: MetricVector


@dataclass
class SelectionManifest:
    k: int
    seed: int
    entries: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ids(self):
        return [ e.sample_id for e in self.entries ]


def build_selection(ids, vectors, payloads, k, seed, skipped=()):
    vec = { v.sample_id: v for v in vectors }
    texts = { p.sample_id: p.text for p in payloads }
    entries = [ SelectionEntry(i, texts[i], vec[i]) for i in ids ]
    return SelectionManifest(k, seed, entries, list(skipped))


def write_selection(manifest, fname):
    fname = Path(fname)
    fname.parent.mkdir(parents=True, exist_ok=True)
    out = {"k": manifest.k, "seed": manifest.seed, "metrics": list(METRICS),
           "skipped": manifest.skipped,
           "selection": [ {"sample_id": e.sample_id, "text": e.text,
                           **{ m: getattr(e.vector, m) for m in METRICS }}
                          for e in manifest.entries ]}
    with open(fname, 'w') as fd:
        yaml.safe_dump(out, fd, sort_keys=False, allow_unicode=True)
    return fname


def read_selection(fname):
    with open(fname, 'r') as fd:
        raw = yaml.safe_load(fd) or {}
    entries = []
    for e in raw.get("selection") or []:
        sid = str(e["sample_id"])
        vector = MetricVector(sid, *[ float(e.get(m, 0.0)) for m in METRICS ])
        entries.append(SelectionEntry(sid, e["text"], vector))
    return SelectionManifest(raw.get("k", len(entries)), raw.get("seed", 0),
                             entries, raw.get("skipped") or [])
