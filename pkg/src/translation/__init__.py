from translation.core import (AuthFailure, BadRequest, EmptyTranslation, MalformedResponse,
                              Provider, ProviderUnavailable, RateLimited, TerminalError,
                              Timeout, TransientError, TranslationError, TranslationRequest,
                              TranslationResult, VerificationUnavailable, request_id)
from translation.faults import DropoutProvider, InstrumentedProvider, ScriptedFaultProvider
from translation.providers import DictionaryProvider, EchoProvider, PseudoProvider
from translation.ratelimit import TokenBucket
from translation.retry import RetryPolicy
from translation.verification import (DEFAULT_THETA, Verdict, VerifiedTranslation, check_output,
                                      translate_with_verification)
from translation.live import LiveProvider




_providers = {"echo": EchoProvider, "dictionary": DictionaryProvider,
              "pseudo": PseudoProvider, "live": LiveProvider,
              "scripted-faults": ScriptedFaultProvider, "dropout": DropoutProvider}
_wrappers = ("scripted-faults", "dropout")



def register_provider(name, cls):
    _providers[name] = cls


def build_provider(name, **params):
    """ Provider from its registry name, wrappers take their `inner` provider config """
    if name not in _providers:
        raise ValueError(f"Provider {name} not found. Chose a provider from {list(_providers.keys())}.")
    if name in _wrappers:
        inner = dict(params.pop("inner", None) or {"name": "echo"})
        params["inner"] = build_provider(inner.pop("name"), **inner)
    return _providers[name](**params)
