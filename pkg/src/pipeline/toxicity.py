"""
Content filters run on the English samples before planning. Dropping happens
at sample level so every language loses the same sample.
"""
import logging
import re

from enum import Enum
from pathlib import Path



logger = logging.getLogger(__name__)


class Decision(str, Enum):
    KEEP = "keep"
    DROP = "drop"
    FLAG = "flag"


def sample_text(sample):
    return '\n'.join( t.text for t in sample.turns )


class KeepAll:
    name = "none"

    def __init__(self, **unused):
        # Blocklist settings merged from the defaults are meaningless here
        pass

    def __call__(self, sample):
        return Decision.KEEP


class BlocklistFilter:
    """
    Case-insensitive whole-word match of any listed term, multi-word terms
    included. Files hold one term per line, `#` starts a comment.
    """
    name = "blocklist"

    def __init__(self, terms=(), path=None, action="drop"):
        terms = list(terms)
        if path is not None:
            terms += self.read_terms(path)
        self.terms = sorted({ t.strip().casefold() for t in terms if t.strip() })
        self.action = Decision(action)
        if self.action is Decision.KEEP:
            raise ValueError("A blocklist match must drop or flag.")
        alternatives = '|'.join( r"\s+".join(map(re.escape, t.split())) for t in self.terms )
        self._re = re.compile(rf"(?<!\w)(?:{alternatives})(?!\w)", re.IGNORECASE) \
                   if self.terms else None

    @staticmethod
    def read_terms(path):
        with open(Path(path), 'r', encoding="utf-8") as fd:
            return [ line.split('#', 1)[0].strip() for line in fd ]

    def __call__(self, sample):
        if self._re is not None and self._re.search(sample_text(sample)):
            return self.action
        return Decision.KEEP


_filters = {"blocklist": BlocklistFilter, "none": KeepAll}



def build_filter(name, **params):
    if name not in _filters:
        raise ValueError(f"Filter {name} not found. Chose a filter from {list(_filters.keys())}.")
    return _filters[name](**params)


def toxicity_stage(sample, filter):
    return Decision(filter(sample))


def apply_filters(samples, filter):
    """ Returns (kept samples, dropped ids, flagged ids), order preserved """
    kept, dropped, flagged = [], [], []
    for s in samples:
        decision = toxicity_stage(s, filter)
        if decision is Decision.DROP:
            dropped.append(s.id)
            continue
        if decision is Decision.FLAG:
            flagged.append(s.id)
        kept.append(s)
    if dropped or flagged:
        logger.info("Content filter dropped %d and flagged %d of %d samples",
                    len(dropped), len(flagged), len(samples))
    return kept, dropped, flagged
