"""Bounded retries for external GET requests."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import httpx

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RetryPolicy:
    attempts: int = 3
    backoff_s: float = 0.5
    timeout_s: float = 10.0
    sleep: Callable[[float], None] = field(default=time.sleep, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.attempts < 1:
            raise ValueError("attempts must be at least 1")

    def delay(self, attempt: int) -> float:
        """Pause after the ``attempt``-th failure (1-based)."""
        return self.backoff_s * 2 ** (attempt - 1)


@dataclass
class FetchResult:
    response: httpx.Response | None
    attempts: int
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.response is not None and self.response.is_success


def _retryable(exc_or_status: Any) -> bool:
    if isinstance(exc_or_status, httpx.TimeoutException):
        return True
    return isinstance(exc_or_status, int) and exc_or_status >= 500


def get_with_retry(
    client: httpx.Client,
    url: str,
    params: Mapping[str, Any] | None = None,
    policy: RetryPolicy = RetryPolicy(),
    headers: Mapping[str, str] | None = None,
) -> FetchResult:
    """GET with retries on timeouts and 5xx only; never raises for HTTP failures."""
    last_error = None
    for attempt in range(1, policy.attempts + 1):
        try:
            resp = client.get(url, params=params, headers=headers, timeout=policy.timeout_s)
        except httpx.TimeoutException as exc:
            last_error = f"timeout: {exc}"
            retry = True
        except httpx.HTTPError as exc:
            return FetchResult(None, attempt, f"{type(exc).__name__}: {exc}")
        else:
            if resp.is_success:
                return FetchResult(resp, attempt)
            last_error = f"HTTP {resp.status_code}"
            retry = _retryable(resp.status_code)
            if not retry:
                return FetchResult(resp, attempt, last_error)
        if attempt < policy.attempts and retry:
            log.debug("retrying %s after %s (attempt %d)", url, last_error, attempt)
            policy.sleep(policy.delay(attempt))
    return FetchResult(None, policy.attempts, last_error)
