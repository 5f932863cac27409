"""
Wrappers around a provider for rehearsing failures: scripted errors, token
dropout, and call instrumentation.
"""
import random
import threading
import time

from dataclasses import replace

from corpus.languages import SOURCE_LANGUAGE
from translation.core import (AuthFailure, EmptyTranslation, MalformedResponse, Provider,
                              ProviderUnavailable, RateLimited, Timeout)



_ERRORS = {"timeout": Timeout, "rate_limited": RateLimited, "malformed": MalformedResponse,
           "empty": EmptyTranslation, "unavailable": ProviderUnavailable,
           "auth": AuthFailure}


def _direction(request):
    return "forward" if request.source == SOURCE_LANGUAGE else "back"


class ScriptedFaultProvider(Provider):
    """
    Fail the first `n` calls of a request, keyed by request id or by source
    text. A negative count fails forever.
    """
    name = "scripted-faults"

    def __init__(self, inner, faults=None, error="timeout", directions=("forward",)):
        self.inner = inner
        self.faults = dict(faults or {})
        self.error = _ERRORS[error] if isinstance(error, str) else error
        self.directions = tuple(directions)
        self.calls = {}
        self._lock = threading.Lock()

    def _budget(self, request):
        for key in (request.request_id, request.text):
            if key in self.faults:
                return key, self.faults[key]
        return None, 0

    def translate(self, request):
        key, budget = self._budget(request)
        if key is not None and _direction(request) in self.directions:
            with self._lock:
                seen = self.calls.get(key, 0)
                self.calls[key] = seen + 1
            if budget < 0 or seen < budget:
                if self.error is RateLimited:
                    raise RateLimited(f"Scripted fault on {key[:16]}.", retry_after=0)
                raise self.error(f"Scripted fault {seen + 1} on {key[:16]}.")
        result = self.inner.translate(request)
        return replace(result, provider_name=self.inner.name)


class DropoutProvider(Provider):
    """
    Drop each output token with probability `rate`. Draws are seeded by the
    request id, so a higher rate drops a superset of the tokens a lower one does.
    """
    name = "dropout"

    def __init__(self, inner, rate=0.1, seed=0, directions=("forward", "back")):
        if not 0 <= rate <= 1:
            raise ValueError(f"Dropout rate must be in [0, 1], got {rate}.")
        self.inner = inner
        self.rate = rate
        self.seed = seed
        self.directions = tuple(directions)

    def translate(self, request):
        result = self.inner.translate(request)
        if _direction(request) not in self.directions or self.rate == 0:
            return result
        rng = random.Random(f"{self.seed}:{request.request_id}")
        tokens = result.text.split()
        kept = [ t for t in tokens if rng.random() >= self.rate ]
        if not kept:
            raise EmptyTranslation("Every token was dropped.")
        return replace(result, text=' '.join(kept))


class InstrumentedProvider(Provider):
    """ Count calls and the highest number of concurrent ones """
    name = "instrumented"

    def __init__(self, inner, delay=0.0):
        self.inner = inner
        self.delay = delay
        self.calls = 0
        self.in_flight = 0
        self.max_in_flight = 0
        self._lock = threading.Lock()

    def translate(self, request):
        with self._lock:
            self.calls += 1
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)
        try:
            if self.delay:
                time.sleep(self.delay)
            return self.inner.translate(request)
        finally:
            with self._lock:
                self.in_flight -= 1
