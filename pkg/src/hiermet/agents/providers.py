"""Agent providers: the offline rule-based one and an OpenAI-compatible remote LLM."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Protocol

import httpx

from hiermet.errors import ProviderError
from hiermet.model import SourceStatus

API_KEY_ENV = "HIERMET_LLM_API_KEY"


class AnalysisProvider(Protocol):
    kind: str
    timeout_s: float
    max_repair_attempts: int


class CompletionProvider(AnalysisProvider, Protocol):
    def complete(self, messages: list[dict[str, str]], *, source: str = "meteorologist") -> str: ...


@dataclass
class RuleBasedProvider:
    """Deterministic provider; needs no network configuration."""

    kind: str = "rule_based"
    timeout_s: float = 0.0
    max_repair_attempts: int = 0


@dataclass
class RemoteLLMProvider:
    endpoint: str
    model: str
    api_key: str | None = None
    timeout_s: float = 60.0
    max_repair_attempts: int = 1
    temperature: float = 0.0
    client: httpx.Client | None = field(default=None, repr=False)
    kind: str = "remote_llm"

    @classmethod
    def from_env(cls, endpoint: str, model: str, **kwargs) -> RemoteLLMProvider:
        return cls(endpoint=endpoint, model=model, api_key=os.environ.get(API_KEY_ENV), **kwargs)

    def complete(self, messages: list[dict[str, str]], *, source: str = "meteorologist") -> str:
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        body = {
            "model": self.model,
            "messages": messages,
            "temperature": self.temperature,
            "response_format": {"type": "json_object"},
        }
        client = self.client or httpx.Client()
        try:
            resp = client.post(
                self.endpoint.rstrip("/") + "/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout_s,
            )
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except httpx.TimeoutException as exc:
            raise ProviderError(
                f"{source} provider timed out after {self.timeout_s:g} s",
                SourceStatus(source, "failed", attempts=1, detail="timeout"),
            ) from exc
        except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
            raise ProviderError(
                f"{source} provider unreachable: {exc}",
                SourceStatus(source, "failed", attempts=1, detail=type(exc).__name__),
            ) from exc
        finally:
            if self.client is None:
                client.close()
