import json
import math

import numpy as np
import pytest

from helpers import llava_record

from oracles import best_dispersion, min_distance

from corpus import AssistantPayload, extract_assistant_payloads, parse_dataset
from sampling import (MetricVector, build_selection, compute_metric_vectors, min_pairwise_distance,
                      read_selection, representative_payloads, select_diverse, write_selection)
from textmetrics import readability



def vec(sid, *values):
    values = list(values) + [0.0] * (4 - len(values))
    return MetricVector(sid, *map(float, values))


def zscored(vectors):
    x = np.array([ v.values() for v in sorted(vectors, key=lambda v: v.sample_id) ])
    std = x.std(axis=0)
    keep = std > 0
    return [ tuple(row) for row in (x[:, keep] - x[:, keep].mean(axis=0)) / std[keep] ]


def test_metric_vectors_recompute():
    payloads = [ AssistantPayload(f"{i:03d}", 1, f"Sentence number {i}. It is short.")
                 for i in range(100) ]
    vectors = compute_metric_vectors(payloads)
    assert len(vectors) == 100
    for p, v in zip(payloads, vectors):
        rep = readability(p.text)
        assert v.sample_id == p.sample_id
        assert (v.la_chars, v.la_words, v.fre, v.fkgl) == (len(p.text), rep.words, rep.fre, rep.fkgl)


def test_metric_vector_of_short_text():
    (v,) = compute_metric_vectors([AssistantPayload("a", 1, "Hi. Bye.")])
    assert (v.la_chars, v.la_words) == (8.0, 2.0)
    assert v.fre == pytest.approx(206.835 - 1.015 * 1 - 84.6 * 1)


def test_metric_vectors_skip_empty_texts():
    skipped = []
    vectors = compute_metric_vectors([AssistantPayload("a", 1, "..."),
                                      AssistantPayload("b", 1, "A dog.")], skipped)
    assert [ v.sample_id for v in vectors ] == ["b"]
    assert skipped == ["a"]
    assert compute_metric_vectors([]) == []


def test_metric_vector_must_be_finite():
    with pytest.raises(ValueError):
        vec("a", math.nan)


def test_representative_payload_is_first_answer():
    rec = llava_record(0, extra_turns=[("And?", "Nothing else.")])
    payloads = representative_payloads(extract_assistant_payloads(parse_dataset(json.dumps([rec]))))
    assert [ p.turn_index for p in payloads ] == [1]


def test_select_nothing():
    assert select_diverse([vec("a", 1)], 0) == []
    assert select_diverse([], 3) == []
    with pytest.raises(ValueError):
        select_diverse([vec("a", 1)], -1)


def test_select_more_than_available():
    vectors = [ vec(s, i) for i, s in enumerate("abc") ]
    assert sorted(select_diverse(vectors, 10)) == ["a", "b", "c"]


def test_identical_vectors_tie_on_ids():
    vectors = [ vec(s, 5, 5, 5, 5) for s in "dcba" ]
    assert select_diverse(vectors, 2) == ["a", "b"]


def test_one_dimensional_collapse():
    vectors = [ vec(s, x) for s, x in zip("abcd", (0, 1, 2, 10)) ]
    assert set(select_diverse(vectors, 2)) == {"a", "d"}
    points = zscored(vectors)
    assert min_distance([points[0], points[3]]) == pytest.approx(best_dispersion(points, 2))


def test_selection_does_not_depend_on_input_order():
    rng = np.random.default_rng(1)
    vectors = [ vec(f"{i:03d}", *rng.normal(size=4)) for i in range(30) ]
    assert select_diverse(vectors, 6) == select_diverse(vectors[::-1], 6)
    assert select_diverse(vectors, 6, seed=1) == select_diverse(vectors, 6, seed=2)


def test_greedy_is_half_of_best_dispersion():
    rng = np.random.default_rng(4)
    vectors = [ vec(f"{i:02d}", *rng.normal(size=4)) for i in range(12) ]
    ids = select_diverse(vectors, 4)
    assert min_pairwise_distance(vectors, ids) >= best_dispersion(zscored(vectors), 4) / 2


def _clustered(rng, nclusters=5, size=20):
    centers = rng.uniform(-50, 50, size=(nclusters, 4))
    points = np.concatenate([ c + rng.normal(size=(size, 4)) for c in centers ])
    return [ vec(f"{i:03d}", *p) for i, p in enumerate(points) ]


def test_maximin_beats_random_subsets():
    rng = np.random.default_rng(0)
    wins = 0
    for _ in range(100):
        vectors = _clustered(rng)
        ids = [ v.sample_id for v in vectors ]
        greedy = min_pairwise_distance(vectors, select_diverse(vectors, 5))
        random_dists = [ min_pairwise_distance(vectors, list(rng.choice(ids, 5, replace=False)))
                         for _ in range(100) ]
        wins += greedy > np.median(random_dists)
    assert wins >= 95


def test_min_pairwise_distance_below_two_ids():
    assert min_pairwise_distance([vec("a", 1), vec("b", 2)], ["a"]) == math.inf


def test_selection_manifest_round_trip(tmp_path):
    payloads = [ AssistantPayload(f"{i:03d}", 1, f"A dog number {i} runs. " * (i + 1))
                 for i in range(8) ]
    vectors = compute_metric_vectors(payloads)
    ids = select_diverse(vectors, 3, seed=11)
    manifest = build_selection(ids, vectors, payloads, 3, 11, skipped=["zzz"])
    fname = write_selection(manifest, tmp_path.joinpath("sel", "selection.yml"))
    again = read_selection(fname)
    assert again.ids == ids
    assert (again.k, again.seed, again.skipped) == (3, 11, ["zzz"])
    assert again.entries[0].text == payloads[int(ids[0])].text
    assert again.entries[0].vector.fre == pytest.approx(manifest.entries[0].vector.fre)
