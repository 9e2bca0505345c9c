"""Service configuration: JSON file plus defaults."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

API_TOKEN_ENV = "EXAMSIM_API_TOKEN"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str = "./examsim-data"
    provider_kind: str = "mock"  # mock | http
    provider_script: str | None = None  # mock rules; bundled demo when unset
    provider_base_url: str = "https://api.openai.com"
    provider_model: str = "gpt-4o-mini"
    provider_path: str = "/v1/chat/completions"
    temperature: float | None = None
    timeout_s: float = 15.0
    request_token_budget: int = 8000
    material_token_budget: int = 1500
    rate_capacity: int = 30
    rate_refill_per_s: float = 0.5

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        config = cls(**raw)
        config.validate()
        return config

    def validate(self) -> None:
        if self.provider_kind not in ("mock", "http"):
            raise ValueError(f"provider_kind must be 'mock' or 'http', got {self.provider_kind!r}")
        if not (1 <= self.port <= 65535):
            raise ValueError(f"port out of range: {self.port}")
        if self.request_token_budget <= 0 or self.material_token_budget <= 0:
            raise ValueError("token budgets must be positive")
        if self.rate_capacity <= 0 or self.rate_refill_per_s <= 0:
            raise ValueError("rate limit parameters must be positive")

    @property
    def sessions_dir(self) -> Path:
        return Path(self.data_dir) / "sessions"

    @property
    def documents_dir(self) -> Path:
        return Path(self.data_dir) / "documents"
