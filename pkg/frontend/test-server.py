"""Disposable API server for the dashboard integration test.

Seeds two assets: one sitting at stage III with a fully checked, undecided
G1 review, and one at stage IX with a freshly registered deployment. Then
serves the HTTP API on the port given as the first argument.
"""

import itertools
import sys

import uvicorn

from assetgov import GovernanceEngine
from assetgov.api import create_app
from assetgov.cards import CardKind
from assetgov.gates import GateId
from assetgov.lifecycle import Stage

TEAM = {
    "pm": "ProductManager", "dom": "DomainExpert", "ds": "DataScientist",
    "de": "DataEngineer", "mle": "MLEngineer", "swe": "SoftwareEngineer",
    "dev": "DevOpsEngineer", "co": "ComplianceOfficer", "hw": "HardwareEngineer",
    "infra": "InfrastructureEngineer", "svc": "ServiceEngineer",
    "qi": "QualityInspector",
}

FIELDS = {
    CardKind.USE_CASE: {
        "business_goal": "reduce scrap", "stakeholders": "quality team",
        "cpps_boundaries": "line 3 camera rig", "data_availability_summary": "ok",
        "risks": "lighting variance",
    },
    CardKind.DATASET: {
        "sources": "line 3 cameras", "collection_context": "day shifts",
        "preprocessing": "crop and normalize", "quality_metrics": "label audit 2%",
        "limits": "no night shifts",
    },
    CardKind.MODEL: {
        "intended_use": "defect detection", "training_data_ref": "Dataset@1",
        "evaluation_metrics": "F1 0.90", "limits": "daylight only",
        "risks": "drift with lighting",
    },
    CardKind.DEPLOYMENT: {
        "target_environment": "edge", "rollout_strategy": "canary 10%",
        "monitoring_plan": "model_quality metric", "rollback_plan": "previous image",
        "risks": "camera firmware",
    },
}


def ticking_clock():
    counter = itertools.count()

    def clock():
        n = next(counter)
        return f"2026-03-01T{n // 3600:02d}:{(n // 60) % 60:02d}:{n % 60:02d}+00:00"

    return clock


def pass_gate(engine, aid, gate, opener, checker, approver):
    review = engine.open_gate_review(aid, gate, opener)
    for item in review.items:
        engine.record_check(review.review_id, item.item_id, "pass", [], checker)
    engine.decide_gate(review.review_id, approver, "approve", "validated")
    return review


def seed(engine, name, target_stage):
    aid = engine.create_asset(name, "", "pm").asset_id
    for pid, role in TEAM.items():
        engine.bind_role(aid, pid, role, "pm")
    steps = {
        Stage.I: lambda: engine.advance(aid, "pm"),
        Stage.II: lambda: engine.advance(aid, "ds"),
        Stage.III: lambda: (
            engine.create_card(aid, CardKind.USE_CASE, "ds", FIELDS[CardKind.USE_CASE]),
            engine.approve_card(aid, CardKind.USE_CASE, "pm", "scope fine"),
            pass_gate(engine, aid, GateId.G1, "ds", "qi", "pm"),
            engine.advance(aid, "ds")),
        Stage.IV: lambda: (
            engine.create_card(aid, CardKind.DATASET, "de", FIELDS[CardKind.DATASET]),
            engine.approve_card(aid, CardKind.DATASET, "pm", "sourcing fine"),
            engine.advance(aid, "de")),
        Stage.V: lambda: (
            engine.create_card(aid, CardKind.MODEL, "ds", FIELDS[CardKind.MODEL]),
            engine.approve_card(aid, CardKind.MODEL, "pm", "metrics fine"),
            engine.advance(aid, "ds")),
        Stage.VI: lambda: engine.advance(aid, "swe"),
        Stage.VII: lambda: (
            pass_gate(engine, aid, GateId.G2, "qi", "mle", "co"),
            engine.advance(aid, "qi")),
        Stage.VIII: lambda: engine.advance(aid, "svc"),
    }
    stage = Stage.I
    while stage < target_stage:
        steps[stage]()
        stage = engine.get_asset(aid).current_stage
    return aid


def main():
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 8471
    engine = GovernanceEngine(clock=ticking_clock())
    for pid in TEAM:
        engine.register_principal(pid)

    # asset one: stage III, G1 open with every item checked, decision pending
    aid = seed(engine, "Board Demo", Stage.III)
    engine.create_card(aid, CardKind.USE_CASE, "ds", FIELDS[CardKind.USE_CASE])
    engine.approve_card(aid, CardKind.USE_CASE, "pm", "scope fine")
    # qi also holds an accountable role, so the integration test can show the
    # API refusing qi's approval of a review qi checked
    engine.bind_role(aid, "qi", "ProductManager", "pm")
    review = engine.open_gate_review(aid, GateId.G1, "ds")
    for item in review.items:
        engine.record_check(review.review_id, item.item_id, "pass", [], "qi")

    # asset two: stage IX with a registered deployment
    rid = seed(engine, "Rollout Demo", Stage.IX)
    engine.create_card(rid, CardKind.DEPLOYMENT, "svc", FIELDS[CardKind.DEPLOYMENT])
    engine.approve_card(rid, CardKind.DEPLOYMENT, "pm", "rollout plan fine")
    engine.register_deployment(rid, 1, 1, "svc")

    uvicorn.run(create_app(engine), host="127.0.0.1", port=port, log_level="warning")


if __name__ == "__main__":
    main()
