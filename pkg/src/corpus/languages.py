"""
Language registry. English is the only source language, the seven others are
translation targets. More codes can be registered at runtime.
"""
import re

from typing import NamedTuple



class UnknownLanguage(ValueError):
    pass


class Language(NamedTuple):
    code: str
    name: str
    # Characters any text in this language should contain, None for Latin scripts
    script: str | None = None
    # Languages written without spaces between words
    unsegmented: bool = False


SOURCE_LANGUAGE = "en"

_LANGUAGES = {
    "en": Language("en", "English"),
    "zh": Language("zh", "Chinese", r"[一-鿿㐀-䶿]", True),
    "fr": Language("fr", "French"),
    "es": Language("es", "Spanish"),
    "ru": Language("ru", "Russian", r"[Ѐ-ӿ]"),
    "hi": Language("hi", "Hindi", r"[ऀ-ॿ]"),
    "ja": Language("ja", "Japanese", r"[぀-ヿ一-鿿]", True),
    "ar": Language("ar", "Arabic", r"[؀-ۿݐ-ݿ]"),
}
BUILTIN_LANGUAGES = tuple(_LANGUAGES)
TARGET_LANGUAGES = tuple(c for c in BUILTIN_LANGUAGES if c != SOURCE_LANGUAGE)

_CODE_RE = re.compile(r"^[a-z]{2}$")



def register_language(code, name, script=None, unsegmented=False):
    if not _CODE_RE.match(code):
        raise UnknownLanguage(f"Language codes are lowercase ISO-639-1, got {code!r}.")
    if code in BUILTIN_LANGUAGES:
        raise ValueError(f"{code} is a built-in language and can't be redefined.")
    _LANGUAGES[code] = Language(code, name, script, unsegmented)
    return _LANGUAGES[code]


def get_language(code):
    try:
        return _LANGUAGES[code]
    except (KeyError, TypeError):
        raise UnknownLanguage(f"Language {code!r} not found. Chose a language from {list(_LANGUAGES)}.") from None


def check_targets(codes):
    """ Validate a list of target codes, keeping order and refusing the source """
    out = []
    for c in codes:
        get_language(c)
        if c == SOURCE_LANGUAGE:
            raise UnknownLanguage(f"{c} is the source language, it can't be a translation target.")
        if c in out:
            raise ValueError(f"Target language {c} given twice.")
        out.append(c)
    return out
