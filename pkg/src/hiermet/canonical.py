"""Canonical JSON encoding used for cache keys, context echoes and replay."""

from __future__ import annotations

import hashlib
import json
from typing import Any


def _plain(obj: Any) -> Any:
    to_dict = getattr(obj, "to_dict", None)
    return to_dict() if callable(to_dict) else obj


def canonical_bytes(obj: Any) -> bytes:
    """Sorted keys, UTF-8, no insignificant whitespace, no NaN/Infinity."""
    return json.dumps(
        _plain(obj),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    ).encode("utf-8")


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()


def pretty(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
