"""
Length analysis and Flesch readability (Reading Ease, Kincaid Grade Level) of
English text. Counts come from our own splitter and syllable heuristic so the
scores are reproducible by hand.
"""
import re

from dataclasses import dataclass

from textmetrics.core import EmptyText



_WORD_RE = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*")
# No special case for abbreviations, "e.g. this" counts two sentences
_SENTENCE_END_RE = re.compile(r"(?<=[.!?])\s+")
_VOWELS_RE = re.compile(r"[aeiouy]+")


@dataclass(frozen=True)
class ReadabilityReport:
    words: int
    sentences: int
    syllables: int
    chars: int
    fre: float
    fkgl: float


def words(text):
    return _WORD_RE.findall(text)


def split_sentences(text):
    parts = _SENTENCE_END_RE.split(text.strip())
    return [ p for p in parts if _WORD_RE.search(p) ]


def count_syllables(word):
    """ Vowel groups, minus a silent final 'e', at least 1 """
    w = re.sub(r"[^a-z]", '', word.lower())
    if not w:
        return 1
    nb = len(_VOWELS_RE.findall(w))
    silent_e = w.endswith('e') and not w.endswith("ee") \
               and not (w.endswith("le") and len(w) > 2 and w[-3] not in "aeiouy")
    if silent_e and nb > 1:
        nb -= 1
    return max(1, nb)


def length_analysis(text):
    """ (chars, words, sentences) """
    return len(text), len(words(text)), len(split_sentences(text))


def flesch_reading_ease(nwords, nsentences, nsyllables):
    return 206.835 - 1.015 * (nwords / nsentences) - 84.6 * (nsyllables / nwords)


def flesch_kincaid_grade(nwords, nsentences, nsyllables):
    return 0.39 * (nwords / nsentences) + 11.8 * (nsyllables / nwords) - 15.59


def readability(text):
    tokens = words(text)
    if not tokens:
        raise EmptyText("Readability is undefined for a text without words.")
    nsent = max(1, len(split_sentences(text)))
    nsyl = sum( count_syllables(w) for w in tokens )
    return ReadabilityReport(words=len(tokens), sentences=nsent, syllables=nsyl,
                             chars=len(text),
                             fre=flesch_reading_ease(len(tokens), nsent, nsyl),
                             fkgl=flesch_kincaid_grade(len(tokens), nsent, nsyl))
