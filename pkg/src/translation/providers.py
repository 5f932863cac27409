""" Offline providers, deterministic and safe to share between threads """
import re
import time

from corpus.languages import SOURCE_LANGUAGE, get_language
from translation.core import Provider
from utils import load_yaml



class EchoProvider(Provider):
    """ Returns its input: translation is identity """
    name = "echo"

    def translate(self, request):
        started = time.perf_counter()
        return self._result(request.text, started)


class DictionaryProvider(Provider):
    """
    Word by word lookup in a `{lang: {english: translated}}` table, unknown words
    go through untouched. Back-translation uses the inverted table.
    """
    name = "dictionary"

    def __init__(self, dictionary=None, path=None):
        table = load_yaml(path) if path is not None else {}
        table.update(dictionary or {})
        self.forward = { lang: dict(words) for lang, words in table.items() }
        self.backward = { lang: { v: k for k, v in words.items() }
                          for lang, words in self.forward.items() }

    def translate(self, request):
        started = time.perf_counter()
        if request.source == SOURCE_LANGUAGE:
            table = self.forward.get(request.target, {})
        else:
            table = self.backward.get(request.source, {})
        text = re.sub(r"\S+", lambda m: table.get(m.group(0), m.group(0)), request.text)
        return self._result(text, started)


# Pairs of ASCII characters packed into one CJK ideograph
_CJK_BASE = 0x4E00
_CJK_SPAN = 128 * 128
_MARKS = {"ru": "ж", "hi": "ह", "ar": "ع"}


def _pack(text):
    out, pending = [], []
    def flush():
        for i in range(0, len(pending), 2):
            a, b = pending[i], pending[i + 1] if i + 1 < len(pending) else 0
            out.append(chr(_CJK_BASE + a * 128 + b))
        pending.clear()
    for ch in text:
        if ord(ch) < 128 and not ch.isspace():
            pending.append(ord(ch))
        else:
            flush()
            out.append(ch)
    flush()
    return ''.join(out)

def _unpack(text):
    out = []
    for ch in text:
        v = ord(ch) - _CJK_BASE
        if 0 <= v < _CJK_SPAN:
            a, b = divmod(v, 128)
            out.append(chr(a) + (chr(b) if b else ''))
        else:
            out.append(ch)
    return ''.join(out)


class PseudoProvider(Provider):
    """
    Pseudo-localization for dry runs: a reversible rewrite that lands in the
    target's script, so back-translation recovers the input exactly and the
    output validation checks (script, length ratio) pass.
    """
    name = "pseudo"

    def _mark(self, lang):
        return _MARKS.get(lang, f"{lang}_")

    def translate(self, request):
        started = time.perf_counter()
        if request.source == SOURCE_LANGUAGE:
            text = self.encode(request.text, request.target)
        else:
            text = self.decode(request.text, request.source)
        return self._result(text, started)

    def encode(self, text, lang):
        if get_language(lang).unsegmented:
            return _pack(text)
        mark = self._mark(lang)
        return re.sub(r"\S+", lambda m: mark + m.group(0), text)

    def decode(self, text, lang):
        if get_language(lang).unsegmented:
            return _unpack(text)
        return re.sub(rf"(?<!\S){re.escape(self._mark(lang))}", '', text)
