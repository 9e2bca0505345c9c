"""Directory-backed persistence: one JSON file per session or document.

Writes go to a temp file in the same directory followed by an atomic
rename, so a crash mid-write always leaves the previous state readable.
"""

from __future__ import annotations

import json
import os
import re
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from examsim.core.session import ExamSession
from examsim.ingest.chunking import Chunk, Document, DocumentFormat

_SAFE_ID_RE = re.compile(r"[A-Za-z0-9_-]{1,64}")


def _check_id(item_id: str) -> str:
    if _SAFE_ID_RE.fullmatch(item_id) is None:
        raise ValueError(f"unsafe store id: {item_id!r}")
    return item_id


def _atomic_write_json(path: Path, payload: dict) -> None:
    tmp = path.with_name(f".{path.name}.{os.getpid()}.{threading.get_ident()}.tmp")
    tmp.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
    os.replace(tmp, path)


class SessionStore:
    """Session persistence with a per-id mutation lock."""

    def __init__(self, directory: str | Path) -> None:
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, session_id: str) -> Path:
        return self._dir / f"{_check_id(session_id)}.json"

    @contextmanager
    def lock(self, session_id: str) -> Iterator[None]:
        with self._registry_lock:
            lock = self._locks.setdefault(session_id, threading.Lock())
        with lock:
            yield

    def save(self, session: ExamSession) -> None:
        _atomic_write_json(self._path(session.id), session.to_dict())

    def load(self, session_id: str) -> ExamSession | None:
        try:
            path = self._path(session_id)
        except ValueError:
            return None
        if not path.exists():
            return None
        return ExamSession.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_ids(self) -> list[str]:
        return sorted(path.stem for path in self._dir.glob("*.json"))


class DocumentStore:
    """Uploaded course material, chunked once at ingest time."""

    def __init__(self, directory: str | Path) -> None:
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)

    def _path(self, document_id: str) -> Path:
        return self._dir / f"{_check_id(document_id)}.json"

    def save(self, document: Document) -> None:
        payload = {
            "id": document.id,
            "title": document.title,
            "body": document.body,
            "format": document.format.value,
            "chunks": [
                {
                    "text": chunk.text,
                    "estimated_tokens": chunk.estimated_tokens,
                    "source_span": list(chunk.source_span),
                }
                for chunk in document.chunks
            ],
        }
        _atomic_write_json(self._path(document.id), payload)

    def load(self, document_id: str) -> Document | None:
        try:
            path = self._path(document_id)
        except ValueError:
            return None
        if not path.exists():
            return None
        raw = json.loads(path.read_text(encoding="utf-8"))
        chunks = tuple(
            Chunk(
                text=item["text"],
                estimated_tokens=item["estimated_tokens"],
                source_span=(item["source_span"][0], item["source_span"][1]),
            )
            for item in raw["chunks"]
        )
        return Document(
            id=raw["id"],
            title=raw["title"],
            body=raw["body"],
            format=DocumentFormat(raw["format"]),
            chunks=chunks,
        )
