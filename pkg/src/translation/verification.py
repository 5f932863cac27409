"""
Cascaded translation: forward to the target language, back to English, and a
BLEU gate between the original and its back-translation. Items under the gate
or failing an output check go to human review, they are never dropped here.
"""
import re

from dataclasses import dataclass, replace
from enum import Enum

from corpus.languages import SOURCE_LANGUAGE, get_language
from textmetrics.bleu import bleu
from textmetrics.tokenize import tokenize
from translation.core import TranslationError, TranslationRequest, VerificationUnavailable
from translation.retry import RetryPolicy



DEFAULT_THETA = 0.3
LENGTH_RATIO = (0.3, 3.0)


class Verdict(str, Enum):
    ACCEPTED = "accepted"
    FLAGGED = "flagged_for_review"


@dataclass(frozen=True)
class VerifiedTranslation:
    forward: object
    back: object
    gate_bleu: float
    verdict: Verdict
    issues: tuple = ()
    attempts: int = 1

    @property
    def needs_review(self):
        return self.verdict is Verdict.FLAGGED or bool(self.issues)

    def to_dict(self):
        return {"forward": self.forward.to_dict(),
                "back": None if self.back is None else self.back.to_dict(),
                "gate_bleu": self.gate_bleu, "verdict": self.verdict.value,
                "issues": list(self.issues), "attempts": self.attempts}


def gate(gate_bleu, theta):
    return Verdict.ACCEPTED if gate_bleu >= theta else Verdict.FLAGGED


def check_output(source_text, translated, target, source=SOURCE_LANGUAGE, ratio=LENGTH_RATIO):
    """ Validation triggers on a forward translation, returns the issues found """
    if not translated or not translated.strip():
        return ["empty"]
    issues = []
    script = get_language(target).script
    if script is not None and not re.search(script, translated):
        issues.append("script")
    nsrc = len(tokenize(source_text, source))
    ntgt = len(tokenize(translated, target))
    if nsrc and not ratio[0] <= ntgt / nsrc <= ratio[1]:
        issues.append("length_ratio")
    return issues


def _attempt(provider, request):
    def run(n):
        return replace(provider.translate(request), attempt=n)
    return run

def _stage_callback(on_attempt, stage, request):
    if on_attempt is None:
        return None
    return lambda n, err, result: on_attempt(stage, request, n, err, result)


def translate_with_verification(text, target, provider, theta=DEFAULT_THETA, preamble_id=0,
                                source=SOURCE_LANGUAGE, retry=None, on_attempt=None,
                                validate=True):
    """
    Forward and back translation of `text` through the same provider.
    `on_attempt(stage, request, attempt, error, result)` sees every provider try.
    Provider errors on the forward pass propagate once the retry policy gives up.
    A back pass that cannot complete raises VerificationUnavailable carrying the
    forward result.
    """
    if not text or not text.strip():
        raise ValueError("Nothing to translate.")
    if not 0 <= theta <= 1:
        raise ValueError(f"Gate threshold must be in [0, 1], got {theta}.")
    retry = retry or RetryPolicy()
    request = TranslationRequest(text, source, target, preamble_id)
    forward, nforward = retry.call(_attempt(provider, request),
                                   _stage_callback(on_attempt, "forward", request))
    back_request = request.reverse(forward.text)
    try:
        back, nback = retry.call(_attempt(provider, back_request),
                                 _stage_callback(on_attempt, "back", back_request))
    except TranslationError as err:
        raise VerificationUnavailable(f"Back-translation failed: {err}",
                                      forward, nforward) from err
    # Back-translation is the candidate, the original the reference
    score = bleu(tokenize(back.text, source), [tokenize(text, source)]).composite
    issues = tuple(check_output(text, forward.text, target, source)) if validate else ()
    return VerifiedTranslation(forward, back, score, gate(score, theta), issues,
                               max(nforward, nback))
