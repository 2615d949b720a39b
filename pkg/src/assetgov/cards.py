"""Versioned documentation cards for use case, dataset, model and deployment.

Each card kind becomes creatable at its designated stage; revisions are
append-only, and an approval supersedes all earlier revisions. The
canonical rendering covers only immutable content, so the stored digest
stays valid regardless of later status changes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

from . import canonical
from .lifecycle import Stage


class CardKind(str, enum.Enum):
    USE_CASE = "UseCase"
    DATASET = "Dataset"
    MODEL = "Model"
    DEPLOYMENT = "Deployment"

    @classmethod
    def from_any(cls, value) -> "CardKind":
        if isinstance(value, CardKind):
            return value
        for kind in cls:
            if kind.value.lower() == str(value).strip().lower():
                return kind
        raise ValueError(f"not a card kind: {value!r}")


# Fixed kind -> stage pairing.
DESIGNATED_STAGE = {
    CardKind.USE_CASE: Stage.III,
    CardKind.DATASET: Stage.IV,
    CardKind.MODEL: Stage.V,
    CardKind.DEPLOYMENT: Stage.IX,
}

# Mandatory sections per kind; all must be non-empty at approval time.
CARD_SECTIONS: Dict[CardKind, List[str]] = {
    CardKind.USE_CASE: ["business_goal", "stakeholders", "cpps_boundaries",
                        "data_availability_summary", "risks"],
    CardKind.DATASET: ["sources", "collection_context", "preprocessing",
                       "quality_metrics", "limits"],
    CardKind.MODEL: ["intended_use", "training_data_ref", "evaluation_metrics",
                     "limits", "risks"],
    CardKind.DEPLOYMENT: ["target_environment", "rollout_strategy",
                          "monitoring_plan", "rollback_plan", "risks"],
}

DEPLOYMENT_ENVIRONMENTS = {"edge", "hybrid", "cloud"}


class CardStatus(str, enum.Enum):
    DRAFT = "Draft"
    APPROVED = "Approved"
    SUPERSEDED = "Superseded"


@dataclass
class AiCard:
    asset_id: str
    kind: CardKind
    revision: int
    status: CardStatus
    author: str
    created_at: str
    fields: Dict[str, str]
    approver: Optional[str] = None
    approval_rationale: str = ""
    content_hash: str = ""

    def __post_init__(self) -> None:
        if not self.content_hash:
            self.content_hash = canonical.digest(self.canonical_doc())

    def content_dict(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "kind": self.kind.value,
            "revision": self.revision,
            "author": self.author,
            "created_at": self.created_at,
            "fields": dict(self.fields),
        }

    def canonical_doc(self) -> bytes:
        return canonical.canonical_bytes(self.content_dict())

    def markdown_doc(self) -> bytes:
        lines = [
            f"# {self.kind.value} Card — {self.asset_id} (rev {self.revision})",
            "",
            f"- author: {self.author}",
            f"- created: {self.created_at}",
            f"- status: {self.status.value}",
            "",
        ]
        for section in CARD_SECTIONS[self.kind]:
            lines.append(f"## {section}")
            lines.append("")
            lines.append(str(self.fields.get(section, "")))
            lines.append("")
        extras = sorted(set(self.fields) - set(CARD_SECTIONS[self.kind]))
        for section in extras:
            lines.append(f"## {section}")
            lines.append("")
            lines.append(str(self.fields[section]))
            lines.append("")
        return "\n".join(lines).encode("utf-8")

    def to_dict(self) -> dict:
        out = self.content_dict()
        out.update({
            "status": self.status.value,
            "approver": self.approver,
            "approval_rationale": self.approval_rationale,
            "content_hash": self.content_hash,
        })
        return out


def missing_sections(kind: CardKind, fields: Dict[str, str]) -> List[str]:
    missing = [s for s in CARD_SECTIONS[kind] if not str(fields.get(s, "")).strip()]
    if kind is CardKind.DEPLOYMENT:
        env = str(fields.get("target_environment", "")).strip().lower()
        if env and env not in DEPLOYMENT_ENVIRONMENTS:
            missing.append("target_environment")
    return missing


def required_cards(stage: Stage) -> Set[CardKind]:
    """Kinds whose designated stage is at or before the given stage."""
    stage = Stage.from_any(stage)
    return {kind for kind, designated in DESIGNATED_STAGE.items() if designated <= stage}
