"""Hash-chained audit ledger, immutable revision storage, retirement manifests.

Each asset owns a totally ordered event chain: hash = SHA-256(payload ||
prev_hash), genesis prev_hash all-zero. Events are never updated or
deleted; any single-byte tamper is detected deterministically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from . import canonical
from .errors import DigestMismatch, NoSuchRevision


@dataclass
class AuditEvent:
    seq: int
    asset_id: str
    actor: str
    action: str
    payload: bytes
    prev_hash: str
    hash: str

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "asset_id": self.asset_id,
            "actor": self.actor,
            "action": self.action,
            "payload": canonical.parse_canonical(self.payload),
            "prev_hash": self.prev_hash,
            "hash": self.hash,
        }


def make_event(seq: int, asset_id: str, actor: str, action: str,
               payload: bytes, prev_hash: str) -> AuditEvent:
    return AuditEvent(seq=seq, asset_id=asset_id, actor=actor, action=action,
                      payload=payload, prev_hash=prev_hash,
                      hash=canonical.chain_hash(payload, prev_hash))


def verify_events(events: List[AuditEvent]) -> Union[str, int]:
    """Recompute the whole chain; return "ok" or the first bad sequence number."""
    prev = canonical.GENESIS_HASH
    for event in events:
        if event.prev_hash != prev or event.hash != canonical.chain_hash(event.payload, event.prev_hash):
            return event.seq
        prev = event.hash
    return "ok"


def export_events(events: List[AuditEvent]) -> bytes:
    """Newline-delimited canonical events for external audit."""
    return b"".join(canonical.canonical_bytes(e.to_dict()) for e in events)


@dataclass
class ArtifactRevision:
    artifact_id: str
    revision: int
    content_hash: str
    created_at: str
    created_in_event: int
    payload: Optional[bytes] = None  # None after a Delete tombstone
    deleted: bool = False

    def to_dict(self) -> dict:
        return {
            "artifact_id": self.artifact_id,
            "revision": self.revision,
            "content_hash": self.content_hash,
            "created_at": self.created_at,
            "created_in_event": self.created_in_event,
            "deleted": self.deleted,
        }

    def read_bytes(self) -> bytes:
        if self.payload is None:
            raise NoSuchRevision(
                f"{self.artifact_id} rev {self.revision} payload was deleted under retention policy")
        if canonical.digest(self.payload) != self.content_hash:
            raise DigestMismatch(
                f"stored bytes of {self.artifact_id} rev {self.revision} do not match digest")
        return self.payload


class RetentionAction(str, enum.Enum):
    RETAIN = "Retain"
    ARCHIVE = "Archive"
    DELETE = "Delete"

    @classmethod
    def from_any(cls, value) -> "RetentionAction":
        if isinstance(value, RetentionAction):
            return value
        for action in cls:
            if action.value.lower() == str(value).strip().lower():
                return action
        raise ValueError(f"not a retention action: {value!r}")


class ManifestStatus(str, enum.Enum):
    DRAFT = "Draft"
    COMPLETE = "Complete"


@dataclass
class ManifestEntry:
    artifact_id: str
    revision: int
    content_hash: str
    retention_action: RetentionAction
    policy_ref: str

    def to_dict(self) -> dict:
        return {
            "artifact_id": self.artifact_id,
            "revision": self.revision,
            "content_hash": self.content_hash,
            "retention_action": self.retention_action.value,
            "policy_ref": self.policy_ref,
        }


@dataclass
class RetirementManifest:
    manifest_id: str
    asset_id: str
    entries: List[ManifestEntry]
    status: ManifestStatus
    uncovered: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "manifest_id": self.manifest_id,
            "asset_id": self.asset_id,
            "status": self.status.value,
            "entries": [e.to_dict() for e in self.entries],
            "uncovered": list(self.uncovered),
        }


# The seven design requirements rendered by the traceability report.
# Category strings are part of the report contract and must not drift.
TRACEABILITY_ROWS: List[Tuple[str, str, str, str]] = [
    ("DR1", "Clear roles and responsibilities", "All stages",
     "Extended roles; Stage responsibilities; AI Cards ownership"),
    ("DR2", "Systematic engineering with defined stages", "All stages",
     "Staged activities with steps; sequenced flow with feedback loops"),
    ("DR3", "End-to-end lifecycle coverage incl. EoL", "All stages",
     "Inclusion of retirement/EoL (XI) and archival process steps"),
    ("DR4", "CPPS integration (OT/IT, edge/hybrid)", "All stages",
     "CPPS activities as process steps, e.g. hybrid testing or edge deploy"),
    ("DR5", "Safe live model updates in operation", "VIII-X",
     "Process steps for pipelines and update gate (X); AI Card revisions"),
    ("DR6", "Embedded compliance and documentation", "III, VII, X",
     "Gate tasks; AI Cards; evidence archives"),
    ("DR7", "Quality assurance", "III, VII, X",
     "Quality gates and monitoring based on defined requirements"),
]
