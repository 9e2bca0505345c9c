"""REST service: endpoints, persistence, auth, rate limiting, wiring."""

from examsim.service.app import create_app
from examsim.service.config import ServiceConfig
from examsim.service.store import DocumentStore, SessionStore

__all__ = ["DocumentStore", "ServiceConfig", "SessionStore", "create_app"]
