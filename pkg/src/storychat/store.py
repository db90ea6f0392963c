"""Embedded document store.

All build artifacts and session state persist as JSON documents behind the
DocumentStore interface, so an external database can be swapped in without
touching the engine. The default implementation keeps one file per
document under a data directory and writes deterministically (sorted keys,
atomic replace), which makes repeated builds byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Protocol
from urllib.parse import quote, unquote


class DocumentStore(Protocol):
    def load(self, key: str) -> dict | None: ...

    def save(self, key: str, doc: dict) -> None: ...

    def keys(self, prefix: str) -> list[str]: ...


def dump_document(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


class JsonFileStore:
    """One JSON file per document under `root`; keys may contain '/'."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        parts = [quote(p, safe="") for p in key.split("/") if p]
        if not parts:
            raise ValueError("empty document key")
        return self.root.joinpath(*parts).with_name(parts[-1] + ".json")

    def load(self, key: str) -> dict | None:
        path = self._path(key)
        if not path.exists():
            return None
        return json.loads(path.read_text("utf-8"))

    def save(self, key: str, doc: dict) -> None:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(dump_document(doc))
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def keys(self, prefix: str) -> list[str]:
        base = self.root / quote(prefix, safe="")
        if not base.is_dir():
            return []
        return sorted(
            f"{prefix}/{unquote(p.stem)}" for p in base.glob("*.json")
        )


class MemoryStore:
    """In-memory store for tests and replay."""

    def __init__(self) -> None:
        self._docs: dict[str, dict] = {}

    def load(self, key: str) -> dict | None:
        doc = self._docs.get(key)
        return json.loads(json.dumps(doc)) if doc is not None else None

    def save(self, key: str, doc: dict) -> None:
        self._docs[key] = json.loads(json.dumps(doc))

    def keys(self, prefix: str) -> list[str]:
        want = prefix.rstrip("/") + "/"
        return sorted(k for k in self._docs if k.startswith(want))

    def clone(self) -> "MemoryStore":
        other = MemoryStore()
        other._docs = json.loads(json.dumps(self._docs))
        return other


def iter_documents(store: DocumentStore, prefix: str) -> Iterable[tuple[str, dict]]:
    for key in store.keys(prefix):
        doc = store.load(key)
        if doc is not None:
            yield key, doc
