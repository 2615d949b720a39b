"""Operation-phase machinery: metric streams, drift rules, rollout state machine.

The drift detectors are governance-level thresholds (static bounds and a
rolling z-score); the engine records and gates updates, it never trains or
serves models. Canary fraction is metadata only.
"""

from __future__ import annotations

import enum
import statistics
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Tuple


@dataclass
class MetricPoint:
    asset_id: str
    deployment_id: str
    metric_name: str
    value: float
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "deployment_id": self.deployment_id,
            "metric_name": self.metric_name,
            "value": self.value,
            "timestamp": self.timestamp,
        }


@dataclass
class StaticBounds:
    min: float
    max: float

    def __post_init__(self) -> None:
        if not self.min < self.max:
            raise ValueError("StaticBounds requires min < max")


@dataclass
class RollingZScore:
    window: int
    k: float

    def __post_init__(self) -> None:
        if self.window < 2:
            raise ValueError("RollingZScore window must be >= 2")
        if self.k <= 0:
            raise ValueError("RollingZScore k must be > 0")


@dataclass
class DriftRule:
    rule_id: str
    metric_name: str
    kind: object  # StaticBounds | RollingZScore

    def to_dict(self) -> dict:
        if isinstance(self.kind, StaticBounds):
            kind = {"type": "static_bounds", "min": self.kind.min, "max": self.kind.max}
        else:
            kind = {"type": "rolling_zscore", "window": self.kind.window, "k": self.kind.k}
        return {"rule_id": self.rule_id, "metric_name": self.metric_name, **kind}


class AlertStatus(str, enum.Enum):
    OPEN = "Open"
    ACKNOWLEDGED = "Acknowledged"
    CLOSED_BY_UPDATE = "ClosedByUpdate"


@dataclass
class DriftAlert:
    alert_id: str
    asset_id: str
    deployment_id: str
    rule_id: str
    metric_name: str
    triggered_at: str
    observed: float
    window_mean: Optional[float] = None
    window_stddev: Optional[float] = None
    window_size: Optional[int] = None
    status: AlertStatus = AlertStatus.OPEN
    closing_review_id: Optional[str] = None
    closing_cycle: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "alert_id": self.alert_id,
            "asset_id": self.asset_id,
            "deployment_id": self.deployment_id,
            "rule_id": self.rule_id,
            "metric_name": self.metric_name,
            "triggered_at": self.triggered_at,
            "observed": self.observed,
            "window_mean": self.window_mean,
            "window_stddev": self.window_stddev,
            "window_size": self.window_size,
            "status": self.status.value,
            "closing_review_id": self.closing_review_id,
            "closing_cycle": self.closing_cycle,
        }


@dataclass
class RuleFinding:
    """Result of evaluating one rule against one new sample."""
    fired: bool
    observed: float
    window_mean: Optional[float] = None
    window_stddev: Optional[float] = None
    window_size: Optional[int] = None


class DriftEvaluator:
    """Streaming evaluation of drift rules, one state per (stream, rule).

    The z-score window holds the *previous* `window` values; the incoming
    sample is compared against their mean and sample standard deviation.
    A degenerate window (stddev 0) fires iff the sample differs from the
    constant.
    """

    def __init__(self) -> None:
        self._windows: Dict[Tuple[str, str], Deque[float]] = {}

    def observe(self, stream_key: str, rule: DriftRule, value: float) -> RuleFinding:
        if isinstance(rule.kind, StaticBounds):
            fired = not (rule.kind.min <= value <= rule.kind.max)
            return RuleFinding(fired=fired, observed=value)
        assert isinstance(rule.kind, RollingZScore)
        key = (stream_key, rule.rule_id)
        window = self._windows.setdefault(key, deque(maxlen=rule.kind.window))
        fired = False
        mean = stddev = None
        size = len(window)
        if size >= rule.kind.window:
            mean = statistics.fmean(window)
            stddev = statistics.stdev(window)
            if stddev == 0.0:
                fired = value != mean
            else:
                fired = abs(value - mean) > rule.kind.k * stddev
        window.append(value)
        return RuleFinding(fired=fired, observed=value, window_mean=mean,
                           window_stddev=stddev, window_size=size if mean is not None else None)


class DeploymentState(str, enum.Enum):
    REGISTERED = "Registered"
    STAGED = "Staged"
    CANARY = "Canary"
    FULL = "Full"
    ROLLED_BACK = "RolledBack"
    RETIRED = "Retired"

    @classmethod
    def from_any(cls, value) -> "DeploymentState":
        if isinstance(value, DeploymentState):
            return value
        for state in cls:
            if state.value.lower() == str(value).strip().lower():
                return state
        raise ValueError(f"not a deployment state: {value!r}")


# Legal edges of the rollout state machine; RolledBack and Retired are terminal.
LEGAL_TRANSITIONS = {
    DeploymentState.REGISTERED: {DeploymentState.STAGED},
    DeploymentState.STAGED: {DeploymentState.CANARY},
    DeploymentState.CANARY: {DeploymentState.FULL, DeploymentState.ROLLED_BACK},
    DeploymentState.FULL: {DeploymentState.ROLLED_BACK, DeploymentState.RETIRED},
    DeploymentState.ROLLED_BACK: set(),
    DeploymentState.RETIRED: set(),
}


@dataclass
class Deployment:
    deployment_id: str
    asset_id: str
    model_card_revision: int
    deployment_card_revision: int
    state: DeploymentState = DeploymentState.REGISTERED
    canary_fraction: Optional[float] = None
    predecessor: Optional[str] = None
    authorizing_review_id: str = ""
    update_cycle: int = 0

    def to_dict(self) -> dict:
        return {
            "deployment_id": self.deployment_id,
            "asset_id": self.asset_id,
            "model_card_revision": self.model_card_revision,
            "deployment_card_revision": self.deployment_card_revision,
            "state": self.state.value,
            "canary_fraction": self.canary_fraction,
            "predecessor": self.predecessor,
            "authorizing_review_id": self.authorizing_review_id,
            "update_cycle": self.update_cycle,
        }


@dataclass
class UpdateProposal:
    proposal_id: str
    asset_id: str
    trigger: str  # alert id or "manual"
    opened_by: str
    opened_at: str
    target_cycle: int
    expected_cards: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "proposal_id": self.proposal_id,
            "asset_id": self.asset_id,
            "trigger": self.trigger,
            "opened_by": self.opened_by,
            "opened_at": self.opened_at,
            "target_cycle": self.target_cycle,
            "expected_cards": list(self.expected_cards),
        }
