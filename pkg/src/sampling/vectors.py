import logging
import math

from dataclasses import asdict, dataclass

from textmetrics import EmptyText, readability



logger = logging.getLogger(__name__)

METRICS = ("la_chars", "la_words", "fre", "fkgl")


@dataclass(frozen=True)
class MetricVector:
    sample_id: str
    la_chars: float
    la_words: float
    fre: float
    fkgl: float

    def __post_init__(self):
        for m in METRICS:
            if not math.isfinite(getattr(self, m)):
                raise ValueError(f"{m} of {self.sample_id} is not finite.")

    def values(self):
        return [ getattr(self, m) for m in METRICS ]

    def to_dict(self):
        return asdict(self)


def representative_payloads(payloads):
    """ First assistant turn of each sample, the one a pretrain sample is about """
    seen, out = set(), []
    for p in payloads:
        if p.sample_id not in seen:
            seen.add(p.sample_id)
            out.append(p)
    return out


def compute_metric_vectors(payloads, skipped=None):
    """ One vector per payload, payloads without any word are skipped with a warning """
    vectors = []
    for p in payloads:
        try:
            rep = readability(p.text)
        except EmptyText:
            logger.warning("Skipping %s (turn %d): no words to measure.", p.sample_id, p.turn_index)
            if skipped is not None:
                skipped.append(p.sample_id)
            continue
        vectors.append(MetricVector(p.sample_id, float(rep.chars), float(rep.words),
                                    rep.fre, rep.fkgl))
    return vectors
