"""Transport-neutral chat-completion contract plus the two implementations."""

from examsim.provider.base import (
    DEFAULT_REQUEST_TOKEN_BUDGET,
    Provider,
    ProviderRequest,
    ProviderResponse,
    fit_to_budget,
)
from examsim.provider.errors import (
    AuthError,
    ProtocolError,
    ProviderError,
    RateLimited,
    Timeout,
)
from examsim.provider.http import OpenAICompatibleProvider
from examsim.provider.mock import ScriptedProvider, ScriptError

__all__ = [
    "AuthError",
    "DEFAULT_REQUEST_TOKEN_BUDGET",
    "OpenAICompatibleProvider",
    "ProtocolError",
    "Provider",
    "ProviderError",
    "ProviderRequest",
    "ProviderResponse",
    "RateLimited",
    "ScriptError",
    "ScriptedProvider",
    "Timeout",
    "fit_to_budget",
]
