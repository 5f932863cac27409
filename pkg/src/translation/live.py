"""
Chat-completion provider over HTTP. The prompt is the rendered preamble of the
request, sent as the only user message:

    POST {base_url}/chat/completions
    {"model": ..., "temperature": 0, "messages": [{"role": "user", "content": prompt}]}

and the translation is read from `choices[0].message.content`.
"""
import logging
import os
import time

import httpx

from corpus.languages import SOURCE_LANGUAGE
from prompt_eval.templates import (extract_translation, load_preambles,
                                   render_back_translation_prompt, render_prompt)
from translation.core import (AuthFailure, BadRequest, MalformedResponse, Provider,
                              ProviderUnavailable, RateLimited, Timeout)
from translation.ratelimit import TokenBucket



logger = logging.getLogger(__name__)

API_KEY_ENV = "LF_PROVIDER_API_KEY"


def _retry_after(response):
    try:
        return float(response.headers.get("Retry-After"))
    except (TypeError, ValueError):
        return None


class LiveProvider(Provider):
    name = "live"

    def __init__(self, base_url, model, preambles_dir=None, api_key_env=API_KEY_ENV,
                 timeout=60.0, rate=None, burst=1, endpoint="/chat/completions",
                 temperature=0.0, transport=None):
        api_key = os.environ.get(api_key_env)
        if not api_key:
            raise AuthFailure(f"Set the provider token in ${api_key_env}.")
        self.model = model
        self.endpoint = endpoint
        self.temperature = temperature
        self.preambles = {}
        if preambles_dir is not None:
            self.add_preambles(load_preambles(preambles_dir))
        self.bucket = TokenBucket(rate, burst)
        self.client = httpx.Client(base_url=base_url, timeout=timeout, transport=transport,
                                   headers={"Authorization": f"Bearer {api_key}"})

    def add_preambles(self, preambles):
        self.preambles.update({ p.id: p for p in preambles })

    def close(self):
        self.client.close()

    def prompt(self, request):
        if request.preamble_id not in self.preambles:
            raise BadRequest(f"Unknown preamble {request.preamble_id}, "
                             f"chose one from {sorted(self.preambles)}.")
        p = self.preambles[request.preamble_id]
        if request.source == SOURCE_LANGUAGE:
            return render_prompt(p, request.target, request.text)
        return render_back_translation_prompt(p, request.source, request.text)

    def _post(self, body):
        try:
            response = self.client.post(self.endpoint, json=body)
        except httpx.TimeoutException as err:
            raise Timeout(f"No answer from provider: {err}") from err
        except httpx.TransportError as err:
            raise ProviderUnavailable(f"Could not reach provider: {err}") from err
        status = response.status_code
        if status == 429:
            raise RateLimited("Provider answered 429.", retry_after=_retry_after(response))
        if status in (401, 403):
            raise AuthFailure(f"Provider refused the token ({status}).")
        if status >= 500:
            raise ProviderUnavailable(f"Provider answered {status}.")
        if status >= 400:
            raise BadRequest(f"Provider answered {status}: {response.text[:200]}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as err:
            raise MalformedResponse(f"Unexpected response body ({err!r}).") from None

    def translate(self, request):
        body = {"model": self.model, "temperature": self.temperature,
                "messages": [{"role": "user", "content": self.prompt(request)}]}
        self.bucket.acquire()
        started = time.perf_counter()
        content = self._post(body)
        if not isinstance(content, str):
            raise MalformedResponse("Message content is not text.")
        logger.debug("%s -> %s in %.0f ms", request.source, request.target,
                     (time.perf_counter() - started) * 1000)
        return self._result(extract_translation(content), started)
