"""Shared fixtures: a deterministic engine, a fully staffed team, and
ceremony helpers that walk an asset through the lifecycle legally."""

import itertools

import pytest

from assetgov import GovernanceEngine
from assetgov.cards import CardKind
from assetgov.gates import GateId
from assetgov.lifecycle import Stage

# One principal per role, named after the role for readable failures.
TEAM = {
    "pm": "ProductManager",
    "dom": "DomainExpert",
    "ds": "DataScientist",
    "de": "DataEngineer",
    "mle": "MLEngineer",
    "swe": "SoftwareEngineer",
    "dev": "DevOpsEngineer",
    "co": "ComplianceOfficer",
    "hw": "HardwareEngineer",
    "infra": "InfrastructureEngineer",
    "svc": "ServiceEngineer",
    "qi": "QualityInspector",
}

CARD_FIELDS = {
    CardKind.USE_CASE: {
        "business_goal": "Reduce scrap on line 3",
        "stakeholders": "production, quality",
        "cpps_boundaries": "camera cell, PLC line 3",
        "data_availability_summary": "image archive since 2023",
        "risks": "lighting variation",
    },
    CardKind.DATASET: {
        "sources": "line 3 camera archive",
        "collection_context": "normal production shifts",
        "preprocessing": "crop, normalize",
        "quality_metrics": "label agreement 0.94",
        "limits": "no night-shift data",
    },
    CardKind.MODEL: {
        "intended_use": "surface defect classification",
        "training_data_ref": "Dataset@1",
        "evaluation_metrics": "F1 0.91 on holdout",
        "limits": "trained on line 3 only",
        "risks": "degrades under new lighting",
    },
    CardKind.DEPLOYMENT: {
        "target_environment": "edge",
        "rollout_strategy": "canary on one station",
        "monitoring_plan": "model_quality metric per batch",
        "rollback_plan": "previous container image kept warm",
        "risks": "station downtime during swap",
    },
}


def ticking_clock():
    """Strictly increasing ISO timestamps, one per call."""
    counter = itertools.count(0)

    def now():
        n = next(counter)
        return f"2026-01-01T{n // 3600:02d}:{(n // 60) % 60:02d}:{n % 60:02d}+00:00"

    return now


@pytest.fixture
def engine():
    return GovernanceEngine(clock=ticking_clock())


@pytest.fixture
def staffed(engine):
    """Engine plus an asset at stage I with every role bound."""
    for pid, _role in TEAM.items():
        engine.register_principal(pid)
    asset = engine.create_asset("Vision QA", "surface defect detection", "pm")
    for pid, role in TEAM.items():
        engine.bind_role(asset.asset_id, pid, role, "pm")
    return engine, asset.asset_id


def staff(engine, asset_id, owner="pm"):
    for pid in TEAM:
        engine.register_principal(pid)
    for pid, role in TEAM.items():
        engine.bind_role(asset_id, pid, role, owner)


def make_card(engine, asset_id, kind, author, approver="pm"):
    engine.create_card(asset_id, kind, author, CARD_FIELDS[kind])
    engine.approve_card(asset_id, kind, approver, f"{kind.value} reviewed")


def pass_gate(engine, asset_id, gate, opener, checker, approver):
    """Open the gate review, pass every item, approve; returns the review."""
    review = engine.open_gate_review(asset_id, gate, opener)
    for item in review.items:
        engine.record_check(review.review_id, item.item_id, "pass", [], checker)
    return engine.decide_gate(review.review_id, approver, "approve", "all checks green")


def advance_to(engine, asset_id, target):
    """Walk a fully staffed asset forward to `target`, doing whatever
    ceremony each stage requires on the way."""
    target = Stage.from_any(target)
    while engine.get_asset(asset_id).current_stage < target:
        stage = engine.get_asset(asset_id).current_stage
        if stage is Stage.III:
            if not engine._states[asset_id].cards.get(CardKind.USE_CASE):
                make_card(engine, asset_id, CardKind.USE_CASE, "ds")
            pass_gate(engine, asset_id, GateId.G1, "ds", "qi", "pm")
            engine.advance(asset_id, "ds")
        elif stage is Stage.IV:
            if not engine._states[asset_id].cards.get(CardKind.DATASET):
                make_card(engine, asset_id, CardKind.DATASET, "de")
            engine.advance(asset_id, "de")
        elif stage is Stage.V:
            if not engine._states[asset_id].cards.get(CardKind.MODEL):
                make_card(engine, asset_id, CardKind.MODEL, "ds")
            engine.advance(asset_id, "ds")
        elif stage is Stage.VI:
            engine.advance(asset_id, "swe")
        elif stage is Stage.VII:
            pass_gate(engine, asset_id, GateId.G2, "qi", "mle", "co")
            engine.advance(asset_id, "qi")
        elif stage is Stage.VIII:
            engine.advance(asset_id, "svc")
        elif stage is Stage.IX:
            if not engine._states[asset_id].cards.get(CardKind.DEPLOYMENT):
                make_card(engine, asset_id, CardKind.DEPLOYMENT, "svc")
            engine.advance(asset_id, "svc")
        elif stage is Stage.X:
            pass_gate(engine, asset_id, GateId.G3, "qi", "svc", "co")
            engine.advance(asset_id, "qi")
        else:
            engine.advance(asset_id, "pm" if stage in (Stage.I,) else
                           "ds" if stage is Stage.II else "pm")


@pytest.fixture
def at_stage(staffed):
    engine, asset_id = staffed

    def go(target):
        advance_to(engine, asset_id, target)
        return engine, asset_id

    return go
