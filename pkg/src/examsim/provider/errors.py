"""Failure modes any provider implementation may raise."""

from __future__ import annotations


class ProviderError(Exception):
    """Base class for chat-completion backend failures."""


class Timeout(ProviderError):
    """The backend did not answer within the deadline."""


class RateLimited(ProviderError):
    """The backend throttled the request."""


class ProtocolError(ProviderError):
    """The backend reply was malformed or otherwise unusable."""


class AuthError(ProviderError):
    """The backend rejected the credentials."""
