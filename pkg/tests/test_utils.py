from pathlib import Path

from utils import canonical_json, init_tracking, load_yaml, rec_update, sha256_obj



def test_include_and_path_resolve_next_to_the_file(tmp_path):
    sub = tmp_path.joinpath("conf")
    sub.mkdir()
    sub.joinpath("retry.yml").write_text("max_attempts: 5\n")
    sub.joinpath("terms.txt").write_text("kite\n")
    sub.joinpath("main.yml").write_text("retry: !include retry.yml\nfilter:\n  path: !path terms.txt\n")
    config = load_yaml(sub.joinpath("main.yml"))
    assert config["retry"] == {"max_attempts": 5}
    assert Path(config["filter"]["path"]) == sub.joinpath("terms.txt").resolve()


def test_empty_yaml(tmp_path):
    fname = tmp_path.joinpath("empty.yml")
    fname.write_text("")
    assert load_yaml(fname) == {}


def test_rec_update():
    base = {"retry": {"max_attempts": 3, "base": 1.0}, "languages": ["fr", "es"], "theta": 0.3}
    out = rec_update(base, {"retry": {"base": 0.0}, "languages": ["ja"]})
    assert out == {"retry": {"max_attempts": 3, "base": 0.0}, "languages": ["ja"], "theta": 0.3}


def test_canonical_json_ignores_key_order():
    assert canonical_json({"b": 1, "a": "é"}) == canonical_json({"a": "é", "b": 1})
    assert sha256_obj({"b": 1, "a": 2}) == sha256_obj({"a": 2, "b": 1})


def test_tracking_disabled_by_default():
    assert init_tracking(None, "translate") is None
    assert init_tracking({"mode": "disabled", "project": "x"}, "translate") is None
