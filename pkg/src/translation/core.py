import time

from dataclasses import dataclass, field

from corpus.languages import get_language
from utils import sha256_obj



class TranslationError(Exception):
    pass

class TransientError(TranslationError):
    """ Worth another attempt """

class TerminalError(TranslationError):
    """ Retrying won't help """

class RateLimited(TransientError):
    def __init__(self, message="Rate limited by provider.", retry_after=None):
        super(RateLimited, self).__init__(message)
        self.retry_after = retry_after

class Timeout(TransientError):
    pass

class ProviderUnavailable(TransientError):
    """ 5xx or connection failure """

class MalformedResponse(TransientError):
    pass

class EmptyTranslation(TransientError):
    pass

class AuthFailure(TerminalError):
    pass

class BadRequest(TerminalError):
    pass

class VerificationUnavailable(TranslationError):
    """ Back-translation failed for good, the forward result is kept for review """
    def __init__(self, message, forward, attempts=1):
        super(VerificationUnavailable, self).__init__(message)
        self.forward = forward
        self.attempts = attempts



def request_id(text, source, target, preamble_id):
    return sha256_obj([text, source, target, preamble_id])


@dataclass(frozen=True)
class TranslationRequest:
    text: str
    source: str
    target: str
    preamble_id: int
    request_id: str = field(default='')

    def __post_init__(self):
        get_language(self.source), get_language(self.target)
        if self.source == self.target:
            raise ValueError(f"Source and target are both {self.source}.")
        rid = request_id(self.text, self.source, self.target, self.preamble_id)
        if not self.request_id:
            object.__setattr__(self, "request_id", rid)
        elif self.request_id != rid:
            raise ValueError(f"Request id {self.request_id} does not match its content.")

    def reverse(self, text):
        """ Back-translation request of `text` """
        return TranslationRequest(text, self.target, self.source, self.preamble_id)


@dataclass(frozen=True)
class TranslationResult:
    text: str
    provider_name: str
    latency_ms: float = 0.0
    attempt: int = 1

    def __post_init__(self):
        if self.attempt < 1:
            raise ValueError("Attempts start at 1.")

    def to_dict(self):
        return {"text": self.text, "provider": self.provider_name,
                "latency_ms": round(self.latency_ms, 3), "attempt": self.attempt}


class Provider:
    """ Machine translation backend, implementations must accept concurrent calls """
    name = "provider"

    def translate(self, request):
        raise NotImplementedError

    def add_preambles(self, preambles):
        """ Templates requests may refer to by `preamble_id`, only used by prompting providers """

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _result(self, text, started):
        if not text or not text.strip():
            raise EmptyTranslation(f"{self.name} returned an empty translation.")
        return TranslationResult(text, self.name, (time.perf_counter() - started) * 1000)
