"""Content-addressed file cache: one directory per key holding raw bodies, context and metadata.

Layout::

    <root>/<key>/raw/<name>.json   verbatim provider bodies
    <root>/<key>/context.json      canonical ForecastContext bytes
    <root>/<key>/meta.json         inputs, raw manifest, source statuses
"""

from __future__ import annotations

import json
import os
import re
import shutil
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Mapping

from hiermet.canonical import canonical_bytes, digest
from hiermet.model import ForecastContext, format_ts

CACHE_DIR_ENV = "HIERMET_CACHE_DIR"
_KEY = re.compile(r"^[0-9a-f]{64}$")
_RAW_NAME = re.compile(r"^[A-Za-z0-9_.-]+$")


def floor_hour(ts: datetime) -> datetime:
    ts = ts.astimezone(timezone.utc)
    return ts - timedelta(minutes=ts.minute, seconds=ts.second, microseconds=ts.microsecond)


def cache_key(
    lat: float,
    lon: float,
    issued_at: datetime,
    sources: Mapping[str, str],
    horizon_h: int,
    mode: str,
) -> str:
    """SHA-256 over the canonical request inputs; issue time is floored to the hour."""
    return digest(
        {
            "lat": round(lat, 4),
            "lon": round(lon, 4),
            "issued_at_utc": format_ts(floor_hour(issued_at)),
            "sources": dict(sources),
            "horizon_h": horizon_h,
            "mode": mode,
        }
    )


def context_digest(ctx: ForecastContext) -> str:
    """Key for contexts submitted directly rather than built from coordinates."""
    return digest(ctx)


def valid_key(key: str) -> bool:
    return bool(_KEY.match(key or ""))


@dataclass
class CacheEntry:
    key: str
    context_bytes: bytes
    raw_responses: dict[str, bytes] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(
        cls, key: str, ctx: ForecastContext, raw: Mapping[str, bytes] | None = None, meta: Mapping[str, Any] | None = None
    ) -> CacheEntry:
        return cls(key, canonical_bytes(ctx), dict(raw or {}), dict(meta or {}))

    @property
    def context(self) -> ForecastContext:
        return ForecastContext.from_dict(json.loads(self.context_bytes))


class FileCache:
    """Concurrent readers, atomic writers; entries are never rewritten once present."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    @classmethod
    def from_env(cls, default: str | Path = ".hiermet-cache") -> FileCache:
        return cls(os.environ.get(CACHE_DIR_ENV, default))

    def path(self, key: str) -> Path:
        return self.root / key

    def __contains__(self, key: str) -> bool:
        return valid_key(key) and (self.path(key) / "context.json").is_file()

    def put(self, entry: CacheEntry) -> str:
        if not valid_key(entry.key):
            raise ValueError(f"malformed cache key {entry.key!r}")
        for name in entry.raw_responses:
            if not _RAW_NAME.match(name):
                raise ValueError(f"unsafe raw response name {name!r}")
        target = self.path(entry.key)
        if target.exists():
            return entry.key
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = Path(tempfile.mkdtemp(prefix=".tmp-", dir=self.root))
        try:
            (tmp / "raw").mkdir()
            for name, body in sorted(entry.raw_responses.items()):
                (tmp / "raw" / f"{name}.json").write_bytes(body)
            (tmp / "context.json").write_bytes(entry.context_bytes)
            meta = {**entry.meta, "key": entry.key}
            meta.setdefault("created_at", format_ts(datetime.now(timezone.utc)))
            (tmp / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=2), "utf-8")
            try:
                os.rename(tmp, target)
            except OSError:
                # Another writer won the race; its entry has the same content address.
                if not target.exists():
                    raise
        finally:
            if tmp.exists():
                shutil.rmtree(tmp, ignore_errors=True)
        return entry.key

    def get(self, key: str) -> CacheEntry | None:
        if key not in self:
            return None
        base = self.path(key)
        raw_dir = base / "raw"
        raw = {p.stem: p.read_bytes() for p in sorted(raw_dir.glob("*.json"))} if raw_dir.is_dir() else {}
        meta_path = base / "meta.json"
        meta = json.loads(meta_path.read_text("utf-8")) if meta_path.is_file() else {}
        return CacheEntry(key, (base / "context.json").read_bytes(), raw, meta)

    def keys(self) -> list[str]:
        if not self.root.is_dir():
            return []
        return sorted(p.name for p in self.root.iterdir() if p.name in self)
