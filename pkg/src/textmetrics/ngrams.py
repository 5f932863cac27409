from collections import Counter
from dataclasses import dataclass, field

from textmetrics.core import InvalidOrder



@dataclass(frozen=True)
class NgramProfile:
    order: int
    counts: Counter = field(default_factory=Counter)
    total: int = 0


def check_order(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidOrder(f"N-gram order must be an integer >= 1, got {n!r}.")


def ngram_counts(tokens, n):
    """ Sliding window count of all n-grams of `tokens` """
    check_order(n)
    tokens = tuple(tokens)
    total = max(0, len(tokens) - n + 1)
    counts = Counter( tokens[i:i + n] for i in range(total) )
    return NgramProfile(n, counts, total)
