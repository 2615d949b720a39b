"""Governance engine for AI assets in manufacturing.

Models the full lifecycle of a plant-floor AI asset: eleven stages in
four phases, quality gates with checklists and segregated approvals,
versioned documentation cards, a hash-chained audit ledger, drift
monitoring with canary rollouts, and auditable retirement.
"""

from .cards import AiCard, CardKind, CardStatus
from .config import EngineConfig, load_config
from .engine import GovernanceEngine
from .errors import GovernanceError
from .gates import GateDecision, GateId, GateReview
from .lifecycle import Asset, AssetStatus, Phase, Stage
from .operation import Deployment, DeploymentState, DriftAlert, DriftRule
from .roles import Principal, RoleBinding, StageAssignment

__version__ = "0.1.0"

__all__ = [
    "AiCard", "Asset", "AssetStatus", "CardKind", "CardStatus", "Deployment",
    "DeploymentState", "DriftAlert", "DriftRule", "EngineConfig", "GateDecision",
    "GateId", "GateReview", "GovernanceEngine", "GovernanceError", "Phase",
    "Principal", "RoleBinding", "Stage", "StageAssignment", "load_config",
    "__version__",
]
