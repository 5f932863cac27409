import threading
import time



class TokenBucket:
    """
    Shared rate limiter: `rate` requests per second on average, bursts of up to
    `burst`. Callers reserve a token under the lock and sleep outside of it, so
    waiting workers do not block each other's bookkeeping.
    A rate of None or 0 disables limiting.
    """
    def __init__(self, rate=None, burst=1, clock=time.monotonic, sleep=time.sleep):
        if rate is not None and rate < 0:
            raise ValueError(f"Rate must be positive, got {rate}.")
        if burst < 1:
            raise ValueError(f"Burst must be at least 1, got {burst}.")
        self.rate = rate
        self.burst = burst
        self.clock = clock
        self.sleep = sleep
        self._tokens = float(burst)
        self._last = clock()
        self._lock = threading.Lock()

    @property
    def unlimited(self):
        return not self.rate

    def reserve(self):
        """ Take a token, returns how long the caller must wait before using it """
        if self.unlimited:
            return 0.0
        with self._lock:
            now = self.clock()
            self._tokens = min(self.burst, self._tokens + (now - self._last) * self.rate)
            self._last = now
            self._tokens -= 1
            return max(0.0, -self._tokens / self.rate)

    def acquire(self):
        wait = self.reserve()
        if wait > 0:
            self.sleep(wait)
        return wait
