"""Lifecycle state machine vocabulary: stages, phases, assets, transitions.

The lifecycle is a fixed graph of eleven stages (displayed as Roman
numerals I-XI) grouped into four phases. Phase boundaries are constants;
only display labels and checklists are configurable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional


class Stage(enum.IntEnum):
    I = 1
    II = 2
    III = 3
    IV = 4
    V = 5
    VI = 6
    VII = 7
    VIII = 8
    IX = 9
    X = 10
    XI = 11

    @property
    def roman(self) -> str:
        return self.name

    @classmethod
    def from_any(cls, value) -> "Stage":
        if isinstance(value, Stage):
            return value
        if isinstance(value, int):
            return cls(value)
        text = str(value).strip().upper()
        if text.isdigit():
            return cls(int(text))
        try:
            return cls[text]
        except KeyError:
            raise ValueError(f"not a stage: {value!r}")


class Phase(str, enum.Enum):
    IDEATION = "Ideation"
    DEVELOPMENT = "Development"
    OPERATION = "Operation"
    RETIREMENT = "Retirement"


# Fixed phase boundaries; never configurable.
PHASE_OF_STAGE = {
    Stage.I: Phase.IDEATION,
    Stage.II: Phase.IDEATION,
    Stage.III: Phase.IDEATION,
    Stage.IV: Phase.DEVELOPMENT,
    Stage.V: Phase.DEVELOPMENT,
    Stage.VI: Phase.DEVELOPMENT,
    Stage.VII: Phase.DEVELOPMENT,
    Stage.VIII: Phase.OPERATION,
    Stage.IX: Phase.OPERATION,
    Stage.X: Phase.OPERATION,
    Stage.XI: Phase.RETIREMENT,
}

PHASE_COLORS = {
    Phase.IDEATION: "lightblue",
    Phase.DEVELOPMENT: "darkblue",
    Phase.OPERATION: "mint",
    Phase.RETIREMENT: "black",
}

GATE_BADGE_COLOR = "yellow"

DEFAULT_STAGE_NAMES = {
    Stage.I: "Use-case ideation",
    Stage.II: "Feasibility & data availability",
    Stage.III: "Prototype validation & development approval",
    Stage.IV: "Data pipeline engineering",
    Stage.V: "Model engineering",
    Stage.VI: "Application & deployment design",
    Stage.VII: "Hybrid testing & release approval",
    Stage.VIII: "Deployment & monitoring",
    Stage.IX: "Continuous improvement & redeployment preparation",
    Stage.X: "Update gate",
    Stage.XI: "Retirement",
}


def phase_of(stage: Stage) -> Phase:
    return PHASE_OF_STAGE[Stage.from_any(stage)]


class AssetStatus(str, enum.Enum):
    ACTIVE = "Active"
    RETIREMENT_PENDING = "RetirementPending"
    RETIRED = "Retired"


class TransitionKind(str, enum.Enum):
    ADVANCE = "Advance"
    FEEDBACK = "Feedback"
    RETIRE = "Retire"


@dataclass
class Asset:
    asset_id: str
    name: str
    description: str
    owner: str
    current_stage: Stage
    status: AssetStatus
    created_at: str
    update_cycle: int = 0


@dataclass
class TransitionRecord:
    asset_id: str
    from_stage: Stage
    to_stage: Stage
    kind: TransitionKind
    actor: str
    reason: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "from_stage": self.from_stage.roman,
            "to_stage": self.to_stage.roman,
            "kind": self.kind.value,
            "actor": self.actor,
            "reason": self.reason,
            "timestamp": self.timestamp,
        }
