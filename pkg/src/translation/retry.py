import logging
import time

from tenacity import (Retrying, retry_if_exception_type, stop_after_attempt,
                      wait_random_exponential)

from translation.core import RateLimited, TransientError



logger = logging.getLogger(__name__)


class RetryPolicy:
    """
    Up to `max_attempts` tries of transient provider errors. Waits follow
    `RateLimited.retry_after` when the provider gives one, otherwise full-jitter
    exponential backoff from `base` seconds, capped at `max_wait`.
    Terminal errors go through on first occurrence.
    """
    def __init__(self, max_attempts=3, base=1.0, max_wait=60.0, sleep=time.sleep):
        if max_attempts < 1:
            raise ValueError(f"At least one attempt is needed, got {max_attempts}.")
        self.max_attempts = max_attempts
        self.base = base
        self.max_wait = max_wait
        self.sleep = sleep
        self._backoff = wait_random_exponential(multiplier=base, max=max_wait)

    @classmethod
    def from_config(cls, config, **kwargs):
        config = dict(config or {})
        return cls(max_attempts=config.get("max_attempts", 3), base=config.get("base", 1.0),
                   max_wait=config.get("max_wait", 60.0), **kwargs)

    def wait(self, retry_state):
        err = retry_state.outcome.exception()
        if isinstance(err, RateLimited) and err.retry_after is not None:
            return min(float(err.retry_after), self.max_wait)
        return self._backoff(retry_state)

    def call(self, fn, on_attempt=None):
        """
        Run `fn(attempt_number)` until it succeeds or the policy gives up.
        `on_attempt(attempt_number, error, value)` is called after every try, one of
        `error` and `value` is None.
        Returns (value, attempts).
        """
        retrying = Retrying(stop=stop_after_attempt(self.max_attempts), wait=self.wait,
                            retry=retry_if_exception_type(TransientError),
                            sleep=self.sleep, reraise=True)
        for attempt in retrying:
            with attempt:
                n = attempt.retry_state.attempt_number
                try:
                    value = fn(n)
                except Exception as err:
                    if on_attempt is not None:
                        on_attempt(n, err, None)
                    if isinstance(err, TransientError) and n < self.max_attempts:
                        logger.debug("Attempt %d failed (%s), retrying", n, type(err).__name__)
                    raise
                if on_attempt is not None:
                    on_attempt(n, None, value)
        return value, n
