"""
Read and write LLaVA pretrain datasets: a JSON array of
`{id, image, conversations: [{from, value}, ...]}` records.
"""
import json
import os
import tempfile

from pathlib import Path

from corpus.core import (IMAGE_TOKEN, AssistantPayload, DuplicateId, MalformedInput,
                         Sample, SchemaViolation, SinkFailure, Speaker, Turn)
from corpus.languages import SOURCE_LANGUAGE, get_language



_SPEAKERS = {s.value: s for s in Speaker}
_RECORD_KEYS = ("id", "image", "conversations")
_TURN_KEYS = ("from", "value")



def _read_all(source):
    if isinstance(source, (bytes, bytearray)):
        return bytes(source)
    if isinstance(source, str):
        return source.encode("utf-8")
    return source.read()

def _lift_image(value, where):
    nb = value.count(IMAGE_TOKEN)
    if nb == 0:
        return value, None
    if nb > 1:
        raise SchemaViolation(f"{where}: {nb} image tokens, only one image per sample is supported.")
    pos = value.index(IMAGE_TOKEN)
    before, after = value[:pos], value[pos + len(IMAGE_TOKEN):]
    # LLaVA puts the token on its own line, the newline goes with it
    if not before and after.startswith('\n'):
        return after[1:], 0
    if not after and before.endswith('\n'):
        return before[:-1], len(before) - 1
    return before + after, pos

def _place_image(text, marker):
    if marker is None:
        return text
    if text and marker == 0:
        return f"{IMAGE_TOKEN}\n{text}"
    if text and marker == len(text):
        return f"{text}\n{IMAGE_TOKEN}"
    return text[:marker] + IMAGE_TOKEN + text[marker:]

def _parse_turn(raw, where, index):
    if not isinstance(raw, dict):
        raise SchemaViolation(f"{where}: conversation entry {index} is not an object.")
    for k in _TURN_KEYS:
        if k not in raw:
            raise SchemaViolation(f"{where}: conversation entry {index} misses `{k}`.")
    if not isinstance(raw["from"], str) or raw["from"] not in _SPEAKERS:
        raise SchemaViolation(f"{where}: unknown speaker {raw['from']!r} in entry {index}.")
    if not isinstance(raw["value"], str):
        raise SchemaViolation(f"{where}: value of entry {index} is not a string.")
    speaker = _SPEAKERS[raw["from"]]
    expected = Speaker.HUMAN if index % 2 == 0 else Speaker.ASSISTANT
    if speaker is not expected:
        raise SchemaViolation(f"{where}: entry {index} should be spoken by {expected.value}.")
    text, marker = _lift_image(raw["value"], where)
    extra = { k: v for k, v in raw.items() if k not in _TURN_KEYS }
    return Turn(speaker, text, marker, extra)

def _parse_record(raw, index, language):
    where = f"record {index}"
    if not isinstance(raw, dict):
        raise SchemaViolation(f"{where} is not an object.")
    for k in _RECORD_KEYS:
        if k not in raw:
            raise SchemaViolation(f"{where} misses `{k}`.")
    sid, image, conv = raw["id"], raw["image"], raw["conversations"]
    if not isinstance(sid, str) or not sid:
        raise SchemaViolation(f"{where}: `id` must be a nonempty string.")
    where = f"record {index} (id {sid})"
    if not isinstance(image, str):
        raise SchemaViolation(f"{where}: `image` must be a string.")
    if not isinstance(conv, list):
        raise SchemaViolation(f"{where}: `conversations` must be an array.")
    turns = tuple( _parse_turn(t, where, i) for i, t in enumerate(conv) )
    if not any(t.is_assistant for t in turns):
        raise SchemaViolation(f"{where} has no gpt turn.")
    extra = { k: v for k, v in raw.items() if k not in _RECORD_KEYS }
    return Sample(sid, image, turns, language, extra)


def parse_dataset(source, language=SOURCE_LANGUAGE):
    """ Parse a LLaVA JSON array (bytes, str or binary stream), order preserved """
    get_language(language)
    try:
        raw = _read_all(source)
        records = json.loads(raw.decode("utf-8"))
        # \uXXXX escapes may decode to lone surrogates, which cannot be written back as UTF-8
        json.dumps(records, ensure_ascii=False).encode("utf-8")
    except UnicodeDecodeError as err:
        raise MalformedInput(f"Not UTF-8 text (byte {err.start}).") from None
    except UnicodeEncodeError:
        raise MalformedInput("String with an unpaired surrogate escape.") from None
    except json.JSONDecodeError as err:
        raise MalformedInput(f"Invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}.") from None
    except RecursionError:
        raise MalformedInput("JSON nested too deeply.") from None
    except ValueError as err:
        raise MalformedInput(f"Invalid JSON: {err}") from None
    if not isinstance(records, list):
        raise MalformedInput(f"Expected a JSON array at top level, got {type(records).__name__}.")
    samples, seen = [], set()
    for i, rec in enumerate(records):
        sample = _parse_record(rec, i, language)
        if sample.id in seen:
            raise DuplicateId(f"record {i}: id {sample.id!r} already used.")
        seen.add(sample.id)
        samples.append(sample)
    return samples


def to_record(sample):
    conv = [ {"from": t.speaker.value, "value": _place_image(t.text, t.image_marker), **t.extra}
             for t in sample.turns ]
    return {"id": sample.id, "image": sample.image, "conversations": conv, **sample.extra}


def dump_dataset(samples, language):
    for s in samples:
        if s.language != language:
            raise SchemaViolation(f"Sample {s.id} is tagged {s.language}, not {language}.")
    records = [ to_record(s) for s in samples ]
    return (json.dumps(records, ensure_ascii=False, indent=2) + '\n').encode("utf-8")


def write_dataset(samples, language, sink):
    """ Serialize to a binary sink, returns number of records written """
    data = dump_dataset(samples, language)
    try:
        sink.write(data)
        sink.flush()
    except OSError as err:
        raise SinkFailure(f"Could not write dataset: {err}") from err
    return len(samples)


def extract_assistant_payloads(samples):
    return [ AssistantPayload(s.id, i, t.text)
             for s in samples for i, t in enumerate(s.turns) if t.is_assistant ]


def dataset_path(directory, stem, language):
    return Path(directory).joinpath(f"{stem}.{language}.json")


def load_dataset(fname, language=SOURCE_LANGUAGE):
    with open(fname, "rb") as fd:
        return parse_dataset(fd, language)


def save_dataset(samples, language, directory, stem):
    """ Atomic write of `<stem>.<lang>.json`, returns (path, count) """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    fname = dataset_path(directory, stem, language)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{fname.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as sink:
            count = write_dataset(samples, language, sink)
        os.replace(tmp, fname)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return fname, count
