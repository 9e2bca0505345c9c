"""HTTP client for OpenAI-compatible chat-completions endpoints."""

from __future__ import annotations

import os
import time
from typing import Any, Callable

import httpx

from examsim.provider.base import (
    DEFAULT_REQUEST_TOKEN_BUDGET,
    EXAMINER_ROLE,
    ProviderRequest,
    ProviderResponse,
    fit_to_budget,
)
from examsim.provider.errors import AuthError, ProtocolError, RateLimited, Timeout

PROVIDER_KEY_ENV = "EXAMSIM_PROVIDER_KEY"

DEFAULT_TIMEOUT_S = 15.0
DEFAULT_COMPLETIONS_PATH = "/v1/chat/completions"

# Retry policy: transient failures only, exponential backoff.
MAX_RETRIES = 2
BACKOFF_BASE_S = 0.5
BACKOFF_FACTOR = 2.0


class OpenAICompatibleProvider:
    """Stateless chat-completions client with bounded retries.

    The api key is read from the EXAMSIM_PROVIDER_KEY environment variable
    unless passed explicitly. A custom httpx transport and sleep function
    can be injected for tests.
    """

    def __init__(
        self,
        *,
        base_url: str,
        model: str,
        api_key: str | None = None,
        temperature: float | None = None,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        completions_path: str = DEFAULT_COMPLETIONS_PATH,
        token_budget: int = DEFAULT_REQUEST_TOKEN_BUDGET,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        key = api_key if api_key is not None else os.environ.get(PROVIDER_KEY_ENV, "")
        if not key:
            raise AuthError(
                f"no provider api key: pass api_key or set {PROVIDER_KEY_ENV}"
            )
        self._url = base_url.rstrip("/") + completions_path
        self._model = model
        self._temperature = temperature
        self._token_budget = token_budget
        self._sleep = sleep
        self._headers = {
            "Authorization": f"Bearer {key}",
            "Content-Type": "application/json",
        }
        self._client = httpx.Client(transport=transport, timeout=timeout_s)

    def close(self) -> None:
        self._client.close()

    def _payload(self, request: ProviderRequest) -> dict[str, Any]:
        messages: list[dict[str, str]] = [{"role": "system", "content": request.instructions}]
        for role, text in request.transcript:
            wire_role = "assistant" if role == EXAMINER_ROLE else "user"
            messages.append({"role": wire_role, "content": text})
        if request.directive_note:
            messages.append({"role": "system", "content": request.directive_note})
        temperature = self._temperature if self._temperature is not None else request.temperature
        return {
            "model": self._model,
            "messages": messages,
            "temperature": temperature,
            "max_tokens": request.max_output_tokens,
        }

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        payload = self._payload(fit_to_budget(request, self._token_budget))
        started = time.perf_counter()
        attempt = 0
        while True:
            attempt += 1
            try:
                return self._attempt(payload, started)
            except (Timeout, RateLimited):
                if attempt > MAX_RETRIES:
                    raise
                self._sleep(BACKOFF_BASE_S * BACKOFF_FACTOR ** (attempt - 1))

    def _attempt(self, payload: dict[str, Any], started: float) -> ProviderResponse:
        try:
            response = self._client.post(self._url, json=payload, headers=self._headers)
        except httpx.TimeoutException as exc:
            raise Timeout(f"provider call exceeded deadline: {exc}") from exc
        except httpx.HTTPError as exc:
            raise ProtocolError(f"provider transport failure: {exc}") from exc

        if response.status_code in (401, 403):
            raise AuthError(f"provider rejected credentials (HTTP {response.status_code})")
        if response.status_code == 429:
            raise RateLimited("provider throttled the request (HTTP 429)")
        if response.status_code != 200:
            raise ProtocolError(f"unexpected provider status: HTTP {response.status_code}")

        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise ProtocolError(f"malformed provider reply: {exc}") from exc
        if not isinstance(text, str) or not text:
            raise ProtocolError("provider reply carried no text")

        usage = body.get("usage")
        latency_ms = (time.perf_counter() - started) * 1000.0
        return ProviderResponse(
            text=text,
            usage=usage if isinstance(usage, dict) else None,
            latency_ms=latency_ms,
        )
