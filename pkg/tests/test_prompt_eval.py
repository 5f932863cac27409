from pathlib import Path

import pytest

from corpus import get_language
from prompt_eval import (DuplicatePreamble, EmptyReport, EvalPair, InvalidPreamble, MissingReference,
                         PreambleReport, PreambleTemplate, SourceLanguageTarget, build_eval_dataset,
                         draft_references, evaluate_preambles, export_radar_data,
                         extract_translation, load_preamble, load_preambles, load_report,
                         read_references, render_back_translation_prompt, render_prompt,
                         save_report, select_best_preamble, summarize_report, write_references)
from sampling import MetricVector, SelectionEntry, SelectionManifest, read_selection
from textmetrics import tokenize
from translation import (DropoutProvider, EchoProvider, Provider, PseudoProvider,
                         ScriptedFaultProvider, TranslationResult)
from utils import load_yaml



CONFIG_DIR = Path(__file__).resolve().parents[1].joinpath("config")

TEXTS = {
    "001": "A cat is sleeping on a red sofa near the window of a small room.",
    "002": "Two children are playing football in the park on a warm summer day.",
    "003": "The photo shows a busy street with many cars and bright lights at night.",
    "004": "A woman is holding a blue umbrella while she walks in the heavy rain.",
}
REFERENCES = {
    "fr": {"001": "Un chat dort sur un canapé rouge près de la fenêtre.",
           "002": "Deux enfants jouent au football dans le parc en été.",
           "003": "La photo montre une rue animée avec beaucoup de voitures la nuit.",
           "004": "Une femme tient un parapluie bleu sous la forte pluie."},
    "ja": {"001": "小さな部屋の窓の近くで猫が寝ています。",
           "002": "夏の公園で二人の子供がサッカーをしています。",
           "003": "夜の通りにはたくさんの車があります。",
           "004": "女性が雨の中で青い傘を持っています。"},
}


def selection(texts=TEXTS):
    entries = [ SelectionEntry(sid, text, MetricVector(sid, 0.0, 0.0, 0.0, 0.0))
                for sid, text in texts.items() ]
    return SelectionManifest(len(entries), 0, entries)


def preambles(ids=range(1, 7)):
    return [ PreambleTemplate(i, f"Preamble {i}: translate the input to {{{{ language }}}}.")
             for i in ids ]


class RiggedProvider(Provider):
    """ Preamble 6 answers with the reference, the others with a shuffled, shortened copy """
    name = "rigged"

    def __init__(self, references):
        self.lookup = { (lang, TEXTS[sid]): ref for lang, refs in references.items()
                        for sid, ref in refs.items() }

    def translate(self, request):
        ref = self.lookup[(request.target, request.text)]
        if request.preamble_id == 6:
            return TranslationResult(ref, self.name)
        tokens = tokenize(ref, request.target)[::-1][request.preamble_id:]
        sep = '' if get_language(request.target).unsegmented else ' '
        return TranslationResult(sep.join(tokens), self.name)


# Preamble files and rendering

def test_shipped_preambles_render_in_every_language():
    loaded = load_preambles(CONFIG_DIR.joinpath("preambles"))
    assert [ p.id for p in loaded ] == [1, 2, 3, 4, 5, 6]
    for p in loaded:
        for lang in ("zh", "fr", "es", "ru", "hi", "ja", "ar"):
            prompt = render_prompt(p, lang, "A dog on a beach.")
            assert get_language(lang).name in prompt
            assert prompt.endswith("Input:\nA dog on a beach.\nExpected Output:")
        assert "English" in render_back_translation_prompt(p, "fr", "Un chien.")


def test_rendering_is_deterministic():
    p6 = load_preamble(CONFIG_DIR.joinpath("preambles", "preamble-6.yml"))
    first = render_prompt(p6, "ja", "A dog on a beach.")
    assert render_prompt(p6, "ja", "A dog on a beach.").encode() == first.encode()
    assert "translate the input to Japanese" in first


def test_examples_follow_the_target_language():
    p = load_preamble(CONFIG_DIR.joinpath("preambles", "preamble-6.yml"))
    prompt = render_prompt(p, "fr", "A cat.")
    assert "### Example 1" in prompt
    assert "Un chien marron court sur la plage." in prompt
    assert "Коричневая" not in prompt
    back = render_back_translation_prompt(p, "ru", "Кот.")
    assert back.index("Коричневая собака бежит по пляжу.") < back.index("A brown dog is running")


def test_shipped_example_layout():
    example = load_yaml(CONFIG_DIR.joinpath("preambles", "examples", "dog-on-beach.yml"))
    assert sorted(example) == ["input", "output"]
    assert sorted(example["output"]) == ["ar", "es", "fr", "hi", "ja", "ru", "zh"]


def test_prompt_sections_in_order():
    p = PreambleTemplate(1, "Translate to {{ language }}.", ("Keep names.",), "Only the text.")
    prompt = render_prompt(p, "es", "Hello.")
    assert prompt.startswith("## Instructions\nTranslate to Spanish.")
    order = [ prompt.index(s) for s in ("Ensure that:", "- Keep names.", "Note: Only the text.",
                                        "## Input", "Expected Output:") ]
    assert order == sorted(order)
    assert "## Examples" not in prompt


def test_prompt_into_english_is_refused():
    with pytest.raises(SourceLanguageTarget):
        render_prompt(preambles()[0], "en", "Hello.")


@pytest.mark.parametrize("instructions", ["{{ language", "Translate to {{ lang }}."])
def test_broken_instructions(instructions):
    with pytest.raises(InvalidPreamble):
        render_prompt(PreambleTemplate(1, instructions), "fr", "Hello.")


def test_invalid_preambles(tmp_path):
    with pytest.raises(InvalidPreamble):
        PreambleTemplate(1, "  ")
    with pytest.raises(InvalidPreamble):
        PreambleTemplate("one", "Translate.")
    fname = tmp_path.joinpath("p.yml")
    fname.write_text("id: 3\n", encoding="utf-8")
    with pytest.raises(InvalidPreamble):
        load_preamble(fname)


def test_duplicate_preamble_ids(tmp_path):
    for name in ("a.yml", "b.yml"):
        tmp_path.joinpath(name).write_text("id: 2\ninstructions: Translate.\n", encoding="utf-8")
    with pytest.raises(DuplicatePreamble):
        load_preambles(tmp_path)


@pytest.mark.parametrize("response, expected", [
    ("Un chat.", "Un chat."),
    ("Expected Output:\nUn chat.", "Un chat."),
    ("## Instructions\n...\nExpected Output:\nUn chien.\nExpected Output:\n  Un chat. \n", "Un chat."),
    ("Expected Output: Un chat.\n## Input\nInput:\nA dog.", "Un chat."),
    ("Expected Output:\nUn chat.\nInput: A dog.", "Un chat."),
])
def test_extract_translation(response, expected):
    assert extract_translation(response) == expected


# Evaluation set

def test_build_eval_dataset_language_major():
    pairs = build_eval_dataset(selection(), REFERENCES)
    assert len(pairs) == 8
    assert [ (p.language, p.sample_id) for p in pairs[:5] ] == \
        [("fr", "001"), ("fr", "002"), ("fr", "003"), ("fr", "004"), ("ja", "001")]
    assert pairs[0].source_en == TEXTS["001"]
    assert len(build_eval_dataset(selection(), REFERENCES, ["ja"])) == 4


def test_missing_reference_names_the_gap():
    refs = {"fr": dict(REFERENCES["fr"])}
    del refs["fr"]["003"]
    with pytest.raises(MissingReference) as info:
        build_eval_dataset(selection(), refs)
    assert (info.value.sample_id, info.value.language) == ("003", "fr")
    with pytest.raises(MissingReference):
        build_eval_dataset(selection(), REFERENCES, ["es"])


def test_eval_pair_validation():
    with pytest.raises(ValueError):
        EvalPair("1", "A cat.", "A cat.", "en")
    with pytest.raises(ValueError):
        EvalPair("1", "A cat.", " ", "fr")


def test_shipped_evaluation_set_is_complete():
    config = load_yaml(CONFIG_DIR.joinpath("default-eval-preambles.yml"))
    pairs = build_eval_dataset(read_selection(config["selection"]),
                               read_references(config["references"]), config["languages"])
    assert len(pairs) == 6 * 7


# Tournament

def test_rigged_tournament_picks_preamble_six(tmp_path):
    pairs = build_eval_dataset(selection(), REFERENCES)
    report = evaluate_preambles(preambles(), pairs, RiggedProvider(REFERENCES), parallelism=4)
    assert len(report) == 6 * 2 * 4
    assert not report.partial
    assert select_best_preamble(report) == 6
    radar = export_radar_data(report, tmp_path.joinpath("radar.csv"))
    assert len(radar) == 24
    assert list(radar.columns) == ["preamble_id", "n", "mean_bleu"]
    for n in range(1, 5):
        order = radar[radar.n == n].set_index("preamble_id").mean_bleu
        assert order.idxmax() == 6
        assert order[6] == 1.0
    lines = tmp_path.joinpath("radar.csv").read_text().splitlines()
    assert lines[0] == "preamble_id,n,mean_bleu"
    assert len(lines) == 25


def test_tournament_is_reproducible(tmp_path):
    pairs = build_eval_dataset(selection(), REFERENCES)
    saved = []
    for i in range(2):
        report = evaluate_preambles(preambles(), pairs, RiggedProvider(REFERENCES), parallelism=4)
        saved.append(save_report(report, tmp_path.joinpath(f"report-{i}.json")).read_bytes())
    assert saved[0] == saved[1]


def report_of(means, scale=1.0, shift=0.0):
    """ Report whose preamble grand means are `means`, optionally rescaled """
    return PreambleReport([ {"preamble_id": pid, "language": lang, "n": n,
                             "mean_bleu": scale * m + shift, "pairs": 6}
                            for pid, m in means.items() for lang in ("fr", "ja") for n in (1, 2) ])


@pytest.mark.parametrize("means, best", [
    ({2: 0.5, 4: 0.5}, 2),
    ({1: 0.30, 5: 0.38, 6: 0.46}, 6),
    ({3: 0.12}, 3),
])
def test_select_best_preamble(means, best):
    assert select_best_preamble(report_of(means)) == best
    for scale, shift in ((2.0, 0.0), (0.5, 0.1), (10.0, -3.0)):
        assert select_best_preamble(report_of(means, scale, shift)) == best


def test_echo_scores_one():
    refs = { lang: dict(TEXTS) for lang in ("fr", "es") }
    report = evaluate_preambles(preambles([1]), build_eval_dataset(selection(), refs),
                                EchoProvider())
    assert report.grand_means() == {1: 1.0}
    assert report.cell(1, "es", 4) == 1.0
    assert report.cell(1, "es", 5) is None


def test_bleu_decreases_with_dropout(no_wait):
    refs = {"fr": dict(TEXTS), "es": dict(TEXTS)}
    pairs = build_eval_dataset(selection(), refs)
    means = []
    for rate in (0.0, 0.2, 0.4):
        provider = DropoutProvider(EchoProvider(), rate, seed=1)
        report = evaluate_preambles(preambles([1]), pairs, provider, retry=no_wait)
        means.append(report.grand_means()[1])
    assert means[0] == 1.0
    assert means[0] > means[1] > means[2]


def test_failed_pairs_make_a_partial_report(no_wait):
    refs = {"fr": REFERENCES["fr"]}
    provider = ScriptedFaultProvider(RiggedProvider(refs), {TEXTS["002"]: -1}, error="unavailable")
    report = evaluate_preambles(preambles([5, 6]), build_eval_dataset(selection(), refs), provider,
                                retry=no_wait)
    assert report.partial
    assert {(m["preamble_id"], m["sample_id"]) for m in report.missing} == {(5, "002"), (6, "002")}
    assert report.complete_ids() == []
    with pytest.raises(EmptyReport):
        select_best_preamble(report)
    assert summarize_report(report)[-1] == "2 pair(s) missing, report is partial"


def test_report_round_trip(tmp_path):
    pairs = build_eval_dataset(selection(), REFERENCES)
    report = evaluate_preambles(preambles([2, 6]), pairs, RiggedProvider(REFERENCES))
    again = load_report(save_report(report, tmp_path.joinpath("report.json")))
    assert again.grand_means() == pytest.approx(report.grand_means())
    assert again.cell(2, "ja", 3) == pytest.approx(report.cell(2, "ja", 3))
    assert summarize_report(again)[1].startswith("preamble 6: 1.0000")


def test_empty_report():
    report = PreambleReport()
    assert report.empty
    assert report.grand_means() == {}
    with pytest.raises(EmptyReport):
        select_best_preamble(report)
    with pytest.raises(EmptyReport):
        export_radar_data(report)


# Reference drafting

def test_draft_references_with_a_reversible_provider(tmp_path):
    refs, queue = draft_references(selection(), ["fr", "zh"], PseudoProvider())
    assert queue == []
    assert sorted(refs) == ["fr", "zh"]
    assert refs["fr"]["001"] == PseudoProvider().encode(TEXTS["001"], "fr")
    again = read_references(write_references(refs, tmp_path.joinpath("refs.yml")))
    assert again == refs


def test_draft_references_queue(no_wait):
    provider = ScriptedFaultProvider(EchoProvider(), {TEXTS["004"]: -1}, error="unavailable")
    refs, queue = draft_references(selection(), ["ru"], provider, retry=no_wait)
    assert sorted(refs["ru"]) == ["001", "002", "003"]
    verdicts = { q["sample_id"]: q for q in queue }
    assert verdicts["004"]["verdict"] == "failed"
    assert verdicts["001"]["verdict"] == "accepted"
    assert verdicts["001"]["issues"] == ["script"]
