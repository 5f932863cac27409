"""
Sentence and corpus BLEU: clipped n-gram precisions, brevity penalty, and the
geometric mean with uniform weights. Precisions stay exact rationals until the
final combination.
"""
import math

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from textmetrics.core import NoReferences
from textmetrics.ngrams import check_order, ngram_counts



class Precision(NamedTuple):
    numerator: int
    denominator: int

    @property
    def undefined(self):
        """ 0/0: the candidate has no n-gram of this order """
        return self.denominator == 0

    @property
    def fraction(self):
        return None if self.undefined else Fraction(self.numerator, self.denominator)

    def __float__(self):
        return math.nan if self.undefined else self.numerator / self.denominator


@dataclass(frozen=True)
class BleuScore:
    precisions: tuple
    brevity_penalty: float
    composite: float
    candidate_len: int
    effective_ref_len: int

    @property
    def max_n(self):
        return len(self.precisions)


def _check_references(references):
    references = [ list(r) for r in references ]
    if not references:
        raise NoReferences("BLEU needs at least one reference.")
    return references

def _clipped(candidate, references, n):
    cand = ngram_counts(candidate, n)
    max_ref = Counter()
    for ref in references:
        for gram, c in ngram_counts(ref, n).counts.items():
            if gram in cand.counts and c > max_ref[gram]:
                max_ref[gram] = c
    matched = sum( min(c, max_ref[g]) for g, c in cand.counts.items() )
    return matched, cand.total

def closest_ref_len(cand_len, references):
    """ Reference length closest to the candidate's, ties go to the shorter """
    return min( (abs(len(r) - cand_len), len(r)) for r in references )[1]

def brevity_penalty(c, r):
    if c > r:
        return 1.0
    if c == 0:
        # Limit of exp(1 - r/c), nothing was produced
        return 0.0
    return math.exp(1 - r / c)

def combine(precisions, bp, smooth=False):
    """
    Geometric mean of the defined precisions times `bp`. Orders the candidate is
    too short to have are left out of the mean, so a text always scores 1 against
    itself. Any zero precision gives 0 unless add-one smoothing (orders >= 2).
    """
    logs = []
    for n, p in enumerate(precisions, start=1):
        if p.undefined:
            continue
        num, den = p
        if smooth and n > 1:
            num, den = num + 1, den + 1
        if num == 0:
            return 0.0
        logs.append(math.log(num / den))
    if not logs:
        return 0.0
    return min(1.0, bp * math.exp(math.fsum(logs) / len(logs)))


def modified_precision(candidate, references, n):
    """ Clipped n-gram matches over candidate n-grams, as an exact (num, den) pair """
    check_order(n)
    references = _check_references(references)
    return Precision(*_clipped(list(candidate), references, n))


def bleu(candidate, references, max_n=4, smooth=False):
    check_order(max_n)
    references = _check_references(references)
    candidate = list(candidate)
    precisions = tuple( Precision(*_clipped(candidate, references, n))
                        for n in range(1, max_n + 1) )
    c, r = len(candidate), closest_ref_len(len(candidate), references)
    bp = brevity_penalty(c, r)
    return BleuScore(precisions, bp, combine(precisions, bp, smooth), c, r)


def bleu_per_order(candidate, references, max_n=4, smooth=False):
    """ Cumulative BLEU-1..BLEU-max_n, each with uniform weights up to its order """
    score = bleu(candidate, references, max_n, smooth)
    return [ combine(score.precisions[:n], score.brevity_penalty, smooth)
             for n in range(1, max_n + 1) ]


def corpus_bleu(candidates, references, max_n=4, smooth=False):
    """ Counts and lengths summed over all segments before combining """
    check_order(max_n)
    if len(candidates) != len(references):
        raise ValueError(f"{len(candidates)} candidates for {len(references)} reference sets.")
    matched, total = [0] * max_n, [0] * max_n
    c = r = 0
    for cand, refs in zip(candidates, references):
        refs = _check_references(refs)
        cand = list(cand)
        for n in range(1, max_n + 1):
            m, t = _clipped(cand, refs, n)
            matched[n - 1] += m
            total[n - 1] += t
        c += len(cand)
        r += closest_ref_len(len(cand), refs)
    precisions = tuple( Precision(m, t) for m, t in zip(matched, total) )
    bp = brevity_penalty(c, r)
    return BleuScore(precisions, bp, combine(precisions, bp, smooth), c, r)
