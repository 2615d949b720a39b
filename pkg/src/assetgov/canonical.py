"""Canonical serialization and hashing.

Canonical form is UTF-8 JSON with lexicographically sorted keys, compact
separators and a trailing LF. The same encoding is used for cards, gate
review exports, and audit event payloads so every digest is reproducible
from the bytes alone.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

GENESIS_HASH = "0" * 64


def canonical_bytes(obj: Any) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


def parse_canonical(data: bytes) -> Any:
    return json.loads(data.decode("utf-8"))


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def chain_hash(payload: bytes, prev_hash_hex: str) -> str:
    """Hash of one ledger event: SHA-256 over payload bytes followed by the raw previous digest."""
    return hashlib.sha256(payload + bytes.fromhex(prev_hash_hex)).hexdigest()
