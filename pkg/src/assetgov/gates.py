"""Quality gate reviews: checklists, evidence, documented approvals.

Gates sit at fixed stages (G1 before development, G2 before release, G3
per update cycle). A review is a single decision cycle; re-approval after
a feedback loop always starts a fresh cycle with the full checklist.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .lifecycle import Stage


class GateId(str, enum.Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"

    @classmethod
    def from_any(cls, value) -> "GateId":
        if isinstance(value, GateId):
            return value
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"not a gate: {value!r}")


GATE_STAGE = {GateId.G1: Stage.III, GateId.G2: Stage.VII, GateId.G3: Stage.X}
STAGE_GATE = {stage: gate for gate, stage in GATE_STAGE.items()}


class CheckResult(str, enum.Enum):
    PENDING = "Pending"
    PASS = "Pass"
    FAIL = "Fail"


class GateDecision(str, enum.Enum):
    OPEN = "Open"
    APPROVED = "Approved"
    REJECTED = "Rejected"
    REQUIRES_REAPPROVAL = "RequiresReapproval"


@dataclass
class ChecklistItem:
    item_id: str
    description: str
    mandatory: bool = True
    result: CheckResult = CheckResult.PENDING
    evidence_refs: List[str] = field(default_factory=list)
    checked_by: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "description": self.description,
            "mandatory": self.mandatory,
            "result": self.result.value,
            "evidence_refs": list(self.evidence_refs),
            "checked_by": self.checked_by,
        }


@dataclass
class Approval:
    principal: str
    role: str
    verdict: str
    rationale: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "principal": self.principal,
            "role": self.role,
            "verdict": self.verdict,
            "rationale": self.rationale,
            "timestamp": self.timestamp,
        }


@dataclass
class GateReview:
    review_id: str
    asset_id: str
    gate: GateId
    cycle: int
    items: List[ChecklistItem]
    decision: GateDecision = GateDecision.OPEN
    approvals: List[Approval] = field(default_factory=list)
    opened_by: str = ""
    opened_at: str = ""
    opened_event_seq: int = 0
    # An approved review authorizes exactly one forward passage.
    consumed: bool = False

    def item(self, item_id: str) -> Optional[ChecklistItem]:
        for it in self.items:
            if it.item_id == item_id:
                return it
        return None

    def mandatory_unpassed(self) -> List[str]:
        return [it.item_id for it in self.items if it.mandatory and it.result is not CheckResult.PASS]

    def to_dict(self) -> dict:
        return {
            "review_id": self.review_id,
            "asset_id": self.asset_id,
            "gate": self.gate.value,
            "stage": GATE_STAGE[self.gate].roman,
            "cycle": self.cycle,
            "decision": self.decision.value,
            "consumed": self.consumed,
            "opened_by": self.opened_by,
            "opened_at": self.opened_at,
            "items": [it.to_dict() for it in self.items],
            "approvals": [a.to_dict() for a in self.approvals],
        }


@dataclass
class Evidence:
    evidence_id: str
    asset_id: str
    description: str
    digest: str
    payload: Optional[bytes] = None
    external_ref: str = ""

    def to_dict(self) -> dict:
        return {
            "evidence_id": self.evidence_id,
            "asset_id": self.asset_id,
            "description": self.description,
            "digest": self.digest,
            "external_ref": self.external_ref,
            "has_payload": self.payload is not None,
        }


# Shipped checklist seeds; configuration, not constants of the model.
DEFAULT_CHECKLISTS: Dict[GateId, List[dict]] = {
    GateId.G1: [
        {"item_id": "business-alignment", "description": "Business alignment with production goals confirmed", "mandatory": True},
        {"item_id": "stakeholder-commitment", "description": "Stakeholder commitment documented", "mandatory": True},
        {"item_id": "technical-feasibility", "description": "Technical feasibility of the prototype demonstrated", "mandatory": True},
        {"item_id": "data-availability", "description": "Data availability validated against the initial IIoT setup", "mandatory": True},
        {"item_id": "cpps-boundaries", "description": "CPPS boundaries validated and asset interfaces defined", "mandatory": True},
        {"item_id": "use-case-card-approved", "description": "Use-case card approved", "mandatory": True},
    ],
    GateId.G2: [
        {"item_id": "dataset-card-approved", "description": "Dataset card approved", "mandatory": True},
        {"item_id": "model-card-approved", "description": "Model card approved", "mandatory": True},
        {"item_id": "reproducible-pipelines", "description": "Data and model pipelines reproducible from versioned inputs", "mandatory": True},
        {"item_id": "lab-tests", "description": "Lab test results reviewed", "mandatory": True},
        {"item_id": "pilot-tests", "description": "Pilot (shop-floor) test results reviewed", "mandatory": True},
        {"item_id": "deployment-design", "description": "Deployment design for edge/hybrid execution reviewed", "mandatory": True},
        {"item_id": "certification-docs", "description": "Certification-relevant documentation plan in place", "mandatory": False},
    ],
    GateId.G3: [
        {"item_id": "monitoring-evidence", "description": "Monitoring evidence for the running deployment reviewed", "mandatory": True},
        {"item_id": "retraining-evaluation", "description": "Retraining evaluation results reviewed", "mandatory": True},
        {"item_id": "card-revisions", "description": "Model and deployment card revisions updated", "mandatory": True},
        {"item_id": "rollback-plan", "description": "Rollback plan verified against the predecessor deployment", "mandatory": True},
    ],
}
