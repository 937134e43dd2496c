"""Chat-completion transport.

Targets any endpoint speaking the common chat-completion JSON schema
(model, messages, temperature, max_tokens), so a local model can stand in
for the hosted API. Tests substitute any object with a compatible
``complete`` method; nothing here is required for offline use.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import requests

from .errors import AuthError, TransportError

__all__ = ["LLMConfig", "ChatClient", "HttpChatClient", "DEFAULT_BASE_URL"]

DEFAULT_BASE_URL = "https://api.openai.com/v1"

ENV_API_KEY = "LARF_API_KEY"
ENV_API_BASE = "LARF_API_BASE"
ENV_MODEL = "LARF_MODEL"


@dataclass(frozen=True)
class LLMConfig:
    base_url: str = DEFAULT_BASE_URL
    model_name: str = ""
    api_key: str = ""
    request_timeout: float = 120.0
    max_retries: int = 2

    def __post_init__(self) -> None:
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    @classmethod
    def from_env(cls, **overrides) -> "LLMConfig":
        """Build a config from LARF_API_KEY / LARF_API_BASE / LARF_MODEL.

        The model name is deliberately not defaulted; online use requires
        LARF_MODEL (or an explicit override).
        """
        values = {
            "base_url": os.environ.get(ENV_API_BASE, DEFAULT_BASE_URL),
            "model_name": os.environ.get(ENV_MODEL, ""),
            "api_key": os.environ.get(ENV_API_KEY, ""),
        }
        values.update(overrides)
        return cls(**values)


class ChatClient:
    """Protocol for chat backends: complete(messages, temperature, max_tokens) -> str."""

    def complete(self, messages: list[dict], *, temperature: float, max_tokens: int) -> str:
        raise NotImplementedError


class HttpChatClient(ChatClient):
    """Blocking HTTP client for chat-completion endpoints."""

    def __init__(self, config: LLMConfig, session: requests.Session | None = None):
        if not config.model_name:
            raise ValueError(f"model name not configured (set {ENV_MODEL})")
        self.config = config
        self.session = session or requests.Session()

    def complete(self, messages: list[dict], *, temperature: float, max_tokens: int) -> str:
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": self.config.model_name,
            "messages": messages,
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"

        last_error: Exception | None = None
        for _ in range(self.config.max_retries + 1):
            try:
                response = self.session.post(
                    url, json=payload, headers=headers, timeout=self.config.request_timeout
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"endpoint rejected credentials (HTTP {response.status_code})")
            if response.status_code == 429 or response.status_code >= 500:
                last_error = TransportError(f"HTTP {response.status_code} from {url}")
                continue
            if response.status_code != 200:
                raise TransportError(f"HTTP {response.status_code} from {url}: {response.text[:200]}")
            return self._extract_content(response)
        raise TransportError(f"request to {url} failed after retries: {last_error}")

    @staticmethod
    def _extract_content(response: requests.Response) -> str:
        try:
            data = response.json()
            content = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed chat-completion reply: {exc}") from exc
        if not isinstance(content, str):
            raise TransportError("chat-completion reply content is not a string")
        return content
