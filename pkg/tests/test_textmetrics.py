import random

from collections import Counter
from fractions import Fraction

import pytest
import sacrebleu

from oracles import BLEU_PAIRS, READABILITY_TABLE, naive_ngrams, oracle_bleu, oracle_precision

from textmetrics import (EmptyText, InvalidOrder, NoReferences, OrderedBleu, Precision, bleu,
                         bleu_per_order, corpus_bleu, count_syllables, length_analysis,
                         modified_precision, ngram_counts, readability, split_sentences, tokenize)



def toks(text):
    return text.split()


def test_tokenize_space_delimited_keeps_case():
    assert tokenize("the Cat  sat") == ["the", "Cat", "sat"]
    assert tokenize("the Cat", fold_case=True) == ["the", "cat"]


def test_tokenize_unsegmented_per_character():
    assert tokenize("猫がいる", "ja") == ["猫", "が", "い", "る"]
    assert tokenize("一只 猫", "zh") == ["一", "只", "猫"]


def test_ngram_counts_by_hand():
    profile = ngram_counts(list("abab"), 2)
    assert profile.counts == Counter({("a", "b"): 2, ("b", "a"): 1})
    assert profile.total == 3


def test_ngram_counts_window_larger_than_sequence():
    profile = ngram_counts(["a"], 2)
    assert not profile.counts
    assert profile.total == 0


def test_ngram_counts_matches_naive_scan():
    rng = random.Random(3)
    tokens = [ rng.choice("abcde") for _ in range(50) ]
    for n in (1, 2, 3, 5):
        profile = ngram_counts(tokens, n)
        assert profile.counts == Counter(naive_ngrams(tokens, n))
        assert profile.total == len(naive_ngrams(tokens, n))


@pytest.mark.parametrize("n", [0, -1, 1.5, True])
def test_invalid_order(n):
    with pytest.raises(InvalidOrder):
        ngram_counts(["a"], n)


def test_modified_precision_clips_counts():
    p = modified_precision(toks("the the the the the the the"), [toks("the cat is on the mat")], 1)
    assert p == Precision(2, 7)
    assert p.fraction == Fraction(2, 7)


def test_modified_precision_self_match():
    cand = toks("a dog runs on the beach")
    for n in range(1, 7):
        p = modified_precision(cand, [cand], n)
        assert p.numerator == p.denominator == len(cand) - n + 1


def test_modified_precision_undefined_when_too_short():
    p = modified_precision(["a", "b"], [["a", "b"]], 3)
    assert p.undefined
    assert p.fraction is None


def test_modified_precision_ignores_reference_order():
    cand = toks("a dog runs on the beach near the sea")
    refs = [toks("a dog runs along the beach"), toks("the dog runs near the sea")]
    for n in range(1, 5):
        assert modified_precision(cand, refs, n) == modified_precision(cand, refs[::-1], n)


def test_appending_unknown_token_dilutes_precision():
    cand, ref = toks("the cat is on a rug"), [toks("the cat is on the mat")]
    longer = cand + ["zzz"]
    for n in range(1, 5):
        before, after = modified_precision(cand, ref, n), modified_precision(longer, ref, n)
        assert after.numerator == before.numerator
        assert after.denominator == before.denominator + 1


def test_no_references():
    with pytest.raises(NoReferences):
        bleu(["a"], [])
    with pytest.raises(NoReferences):
        modified_precision(["a"], [], 1)


def test_bleu_identity():
    x = toks("a man in a hat rides a bike down the road")
    score = bleu(x, [x])
    assert score.composite == 1.0
    assert score.brevity_penalty == 1.0
    assert bleu_per_order(x, [x]) == [1.0, 1.0, 1.0, 1.0]


def test_bleu_short_identity_scores_one():
    assert bleu(["hello"], [["hello"]]).composite == 1.0


def test_bleu_hand_case():
    score = bleu(toks("the the the the the the the"), [toks("the cat is on the mat")])
    assert score.candidate_len == 7 and score.effective_ref_len == 6
    assert score.brevity_penalty == 1.0
    assert score.composite == 0.0
    assert bleu_per_order(toks("the the the the the the the"),
                          [toks("the cat is on the mat")])[0] == pytest.approx(2 / 7)


def test_bleu_empty_candidate():
    score = bleu([], [toks("the cat")])
    assert score.brevity_penalty == 0.0
    assert score.composite == 0.0


def test_bleu_closest_reference_ties_go_to_shorter():
    score = bleu(toks("a b c"), [toks("a b"), toks("a b c d")])
    assert score.effective_ref_len == 2


@pytest.mark.parametrize("candidate, references", BLEU_PAIRS)
def test_bleu_matches_oracle(candidate, references):
    cand, refs = toks(candidate), [ toks(r) for r in references ]
    score = bleu(cand, refs)
    assert score.composite == pytest.approx(oracle_bleu(cand, refs), abs=1e-9)
    assert 0.0 <= score.composite <= 1.0
    for n in range(1, 5):
        assert tuple(score.precisions[n - 1]) == oracle_precision(cand, refs, n)


@pytest.mark.parametrize("candidate, references", BLEU_PAIRS)
def test_bleu_per_order_matches_oracle(candidate, references):
    cand, refs = toks(candidate), [ toks(r) for r in references ]
    expected = [ oracle_bleu(cand, refs, n) for n in range(1, 5) ]
    assert bleu_per_order(cand, refs) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("candidate, references",
                         [ (c, refs) for c, refs in BLEU_PAIRS if len(c.split()) >= 4 ])
def test_bleu_agrees_with_sacrebleu(candidate, references):
    cand, refs = toks(candidate), [ toks(r) for r in references ]
    expected = sacrebleu.sentence_bleu(candidate, references, tokenize="none",
                                       smooth_method="none").score / 100
    assert bleu(cand, refs).composite == pytest.approx(expected, abs=1e-9)


def test_bleu_per_order_without_shared_bigrams():
    scores = bleu_per_order(toks("mat the on is cat the"), [toks("the cat is on the mat")])
    assert scores[0] > 0
    assert scores[1:] == [0.0, 0.0, 0.0]


def test_bleu_per_order_non_increasing_on_shared_prefix():
    ref = toks("the cat is on the mat")
    for cand in ("the cat is on a rug", "the cat is asleep now", "the cat sleeps here too"):
        scores = bleu_per_order(toks(cand), [ref])
        assert all( a >= b for a, b in zip(scores, scores[1:]) )


def test_smoothing_only_lifts_zero_higher_orders():
    cand, ref = toks("the cat sat down"), [toks("the cat is on the mat")]
    assert bleu(cand, ref).composite == 0.0
    assert bleu(cand, ref, smooth=True).composite > 0.0


def test_corpus_bleu_sums_counts():
    pairs = [ (toks(c), [ toks(r) for r in refs ]) for c, refs in BLEU_PAIRS[:6] ]
    score = corpus_bleu([ c for c, _ in pairs ], [ r for _, r in pairs ])
    for n in range(1, 5):
        num = sum( oracle_precision(c, r, n)[0] for c, r in pairs )
        den = sum( oracle_precision(c, r, n)[1] for c, r in pairs )
        assert tuple(score.precisions[n - 1]) == (num, den)
    single = corpus_bleu([toks("a b c d")], [[toks("a b c d")]])
    assert single.composite == 1.0


def test_corpus_bleu_length_mismatch():
    with pytest.raises(ValueError):
        corpus_bleu([["a"]], [])


def test_ordered_bleu_mean():
    acc = OrderedBleu()
    acc.update(toks("a b c d"), [toks("a b c d")])
    acc.update(toks("mat the on is cat the"), [toks("the cat is on the mat")])
    assert len(acc) == 2
    assert acc.compute() == pytest.approx([1.0, 0.5, 0.5, 0.5])


def test_ordered_bleu_empty_and_reduction():
    acc = OrderedBleu(max_n=2, reduction="none")
    assert acc.compute() is None
    acc.update(["a"], [["a"]])
    assert acc.compute() == [[1.0, 1.0]]
    acc = OrderedBleu(reduction="max")
    acc.update(["a"], [["a"]])
    with pytest.raises(ValueError):
        acc.compute()


@pytest.mark.parametrize("word, expected", [("the", 1), ("made", 1), ("little", 2), ("table", 2),
                                            ("happy", 2), ("animals", 3), ("free", 1), ("a", 1),
                                            ("2024", 1)])
def test_count_syllables(word, expected):
    assert count_syllables(word) == expected


@pytest.mark.parametrize("text, nwords, nsent, nsyl, fre, fkgl", READABILITY_TABLE)
def test_readability_table(text, nwords, nsent, nsyl, fre, fkgl):
    report = readability(text)
    assert (report.words, report.sentences, report.syllables) == (nwords, nsent, nsyl)
    assert report.fre == pytest.approx(fre, abs=0.01)
    assert report.fkgl == pytest.approx(fkgl, abs=0.01)


def test_readability_ratio_invariance():
    once = readability("The cat sat on the mat.")
    twice = readability("The cat sat on the mat. The cat sat on the mat.")
    assert twice.fre == pytest.approx(once.fre)
    assert twice.fkgl == pytest.approx(once.fkgl)


@pytest.mark.parametrize("text", ["", "   ", "... !?"])
def test_readability_without_words(text):
    with pytest.raises(EmptyText):
        readability(text)


def test_length_analysis():
    assert length_analysis("") == (0, 0, 0)
    assert length_analysis("Hi. Bye.") == (8, 2, 2)


def test_sentence_splitter_does_not_know_abbreviations():
    assert len(split_sentences("See e.g. this one. And that!")) == 3
