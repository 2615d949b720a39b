"""Operation phase: drift rules, metric ingestion, rollout state machine."""

import math
import random

import pytest

from assetgov.cards import CardKind
from assetgov.errors import (GateNotApproved, IllegalTransition, InactiveDeployment,
                             MissingApprovalRef, NonMonotonicTimestamp,
                             UnapprovedCardRevision, UnknownAlert, ValidationError,
                             WrongPhase)
from assetgov.gates import GateId
from assetgov.lifecycle import Stage
from assetgov.operation import (AlertStatus, DeploymentState, DriftEvaluator,
                                DriftRule, LEGAL_TRANSITIONS, RollingZScore,
                                StaticBounds)

from conftest import CARD_FIELDS, make_card, pass_gate


def ts(i):
    return f"2026-03-01T{i // 3600:02d}:{(i // 60) % 60:02d}:{i % 60:02d}+00:00"


@pytest.fixture
def released(at_stage):
    """Asset at stage IX with an approved Deployment card and a Full deployment."""
    engine, aid = at_stage(Stage.IX)
    make_card(engine, aid, CardKind.DEPLOYMENT, "svc")
    dep = engine.register_deployment(aid, 1, 1, "svc")
    engine.transition_deployment(dep.deployment_id, "Staged", "svc")
    engine.transition_deployment(dep.deployment_id, "Canary", "svc")
    engine.transition_deployment(dep.deployment_id, "Full", "svc",
                                 approval_ref=dep.authorizing_review_id)
    return engine, aid, dep.deployment_id


# ----------------------------------------------------------------- drift rules

def test_static_bounds_rule():
    rule = DriftRule("r", "temp", StaticBounds(min=10.0, max=40.0))
    ev = DriftEvaluator()
    assert not ev.observe("s", rule, 25.0).fired
    assert ev.observe("s", rule, 41.0).fired
    assert ev.observe("s", rule, 9.99).fired
    with pytest.raises(ValueError):
        StaticBounds(min=5.0, max=5.0)


def test_zscore_needs_full_window_of_prior_values():
    rule = DriftRule("r", "m", RollingZScore(window=5, k=3.0))
    ev = DriftEvaluator()
    # first five samples only seed the window, however extreme
    for v in (0.0, 100.0, -50.0, 7.0, 3.0):
        assert not ev.observe("s", rule, v).fired


def test_zscore_matches_manual_recomputation():
    """Oracle: recompute mean/stddev with explicit sums over the last
    `window` previous values and compare decisions sample by sample."""
    rng = random.Random(7)
    rule = DriftRule("r", "m", RollingZScore(window=20, k=2.5))
    ev = DriftEvaluator()
    series = [rng.gauss(5.0, 1.0) for _ in range(200)]
    series[150] += 30.0
    history = []
    for x in series:
        finding = ev.observe("s", rule, x)
        if len(history) >= 20:
            window = history[-20:]
            mean = sum(window) / 20
            var = sum((v - mean) ** 2 for v in window) / 19
            sd = math.sqrt(var)
            expected = abs(x - mean) > 2.5 * sd if sd > 0 else x != mean
            assert finding.fired == expected
            assert math.isclose(finding.window_mean, mean, rel_tol=1e-12)
            assert math.isclose(finding.window_stddev, sd, rel_tol=1e-12)
        else:
            assert not finding.fired
        history.append(x)


def test_constant_window_fires_only_on_change():
    rule = DriftRule("r", "m", RollingZScore(window=3, k=3.0))
    ev = DriftEvaluator()
    for _ in range(3):
        ev.observe("s", rule, 1.0)
    assert not ev.observe("s", rule, 1.0).fired
    assert ev.observe("s", rule, 1.0001).fired


def test_rule_parameter_validation():
    with pytest.raises(ValueError):
        RollingZScore(window=1, k=3.0)
    with pytest.raises(ValueError):
        RollingZScore(window=10, k=0.0)


# ------------------------------------------------------------------ ingestion

def test_metrics_require_active_deployment(at_stage):
    engine, aid = at_stage(Stage.IX)
    make_card(engine, aid, CardKind.DEPLOYMENT, "svc")
    dep = engine.register_deployment(aid, 1, 1, "svc")
    with pytest.raises(InactiveDeployment):
        engine.ingest_metrics([{"deployment_id": dep.deployment_id,
                                "metric_name": "model_quality", "value": 0.9,
                                "timestamp": ts(0)}])


def test_ingest_rejects_timestamp_regressions_atomically(released):
    engine, aid, dep = released
    ok = [{"deployment_id": dep, "metric_name": "model_quality", "value": 0.9,
           "timestamp": ts(i)} for i in range(3)]
    engine.ingest_metrics(ok)
    bad = ok[:1] + [{"deployment_id": dep, "metric_name": "model_quality",
                     "value": 0.9, "timestamp": ts(0)}]
    bad[0] = {**bad[0], "timestamp": ts(5)}
    count_before = engine._states[aid].streams[f"{dep}|model_quality"].count
    with pytest.raises(NonMonotonicTimestamp):
        engine.ingest_metrics(bad)
    # the whole batch was refused, including its valid head
    assert engine._states[aid].streams[f"{dep}|model_quality"].count == count_before


def test_alert_fires_once_per_rule_and_deployment(released):
    engine, aid, dep = released
    points = [{"deployment_id": dep, "metric_name": "model_quality",
               "value": 0.9, "timestamp": ts(i)} for i in range(50)]
    # two consecutive outliers: only one Open alert may exist
    points += [{"deployment_id": dep, "metric_name": "model_quality",
                "value": 0.1, "timestamp": ts(50 + i)} for i in range(2)]
    engine.ingest_metrics(points)
    alerts = engine.evaluate_rules(aid)
    assert len([a for a in alerts if a.status is AlertStatus.OPEN]) == 1
    alert = alerts[0]
    assert alert.metric_name == "model_quality"
    assert alert.window_size == 50
    assert alert.observed == 0.1


def test_update_proposal_acknowledges_alert(released):
    engine, aid, dep = released
    points = [{"deployment_id": dep, "metric_name": "model_quality",
               "value": 0.9, "timestamp": ts(i)} for i in range(50)]
    points.append({"deployment_id": dep, "metric_name": "model_quality",
                   "value": 0.1, "timestamp": ts(50)})
    engine.ingest_metrics(points)
    alert = engine.evaluate_rules(aid)[0]
    with pytest.raises(UnknownAlert):
        engine.open_update_proposal(aid, "no-such-alert", "svc")
    proposal = engine.open_update_proposal(aid, alert.alert_id, "svc")
    assert proposal.target_cycle == 1
    assert engine.evaluate_rules(aid)[0].status is AlertStatus.ACKNOWLEDGED


def test_update_proposal_requires_operation_phase(at_stage):
    engine, aid = at_stage(Stage.V)
    with pytest.raises(WrongPhase):
        engine.open_update_proposal(aid, "manual", "ds")


# ---------------------------------------------------------------- deployments

def test_register_requires_release_gate(at_stage):
    engine, aid = at_stage(Stage.VI)
    with pytest.raises(GateNotApproved):
        engine.register_deployment(aid, 1, 1, "swe")


def test_register_requires_approved_card_revisions(at_stage):
    engine, aid = at_stage(Stage.IX)
    engine.create_card(aid, CardKind.DEPLOYMENT, "svc", CARD_FIELDS[CardKind.DEPLOYMENT])
    with pytest.raises(UnapprovedCardRevision):
        engine.register_deployment(aid, 1, 1, "svc")  # deployment card still Draft


def test_rollout_edges_enforced(at_stage):
    engine, aid = at_stage(Stage.IX)
    make_card(engine, aid, CardKind.DEPLOYMENT, "svc")
    dep = engine.register_deployment(aid, 1, 1, "svc").deployment_id
    with pytest.raises(IllegalTransition):
        engine.transition_deployment(dep, "Canary", "svc")  # must stage first
    engine.transition_deployment(dep, "Staged", "svc")
    with pytest.raises(IllegalTransition):
        engine.transition_deployment(dep, "Full", "svc")  # must canary first
    with pytest.raises(ValidationError):
        engine.transition_deployment(dep, "Canary", "svc", canary_fraction=1.5)
    engine.transition_deployment(dep, "Canary", "svc", canary_fraction=0.25)
    assert engine.get_deployment(dep).canary_fraction == 0.25
    with pytest.raises(MissingApprovalRef):
        engine.transition_deployment(dep, "Full", "svc")
    with pytest.raises(GateNotApproved):
        engine.transition_deployment(dep, "Full", "svc", approval_ref=f"{aid}:G1:1")
    review = engine.get_deployment(dep).authorizing_review_id
    engine.transition_deployment(dep, "Full", "svc", approval_ref=review)
    assert engine.get_deployment(dep).state is DeploymentState.FULL


def test_rollback_reinstates_predecessor(released):
    engine, aid, dep1 = released
    # prepare the update cycle: fresh card revisions and an approved G3
    engine.revise_card(aid, CardKind.MODEL, "ds", CARD_FIELDS[CardKind.MODEL])
    engine.approve_card(aid, CardKind.MODEL, "pm", "retrained")
    engine.revise_card(aid, CardKind.DEPLOYMENT, "svc", CARD_FIELDS[CardKind.DEPLOYMENT])
    engine.approve_card(aid, CardKind.DEPLOYMENT, "pm", "updated")
    engine.advance(aid, "svc")
    review = pass_gate(engine, aid, GateId.G3, "qi", "svc", "co")
    dep2 = engine.register_deployment(aid, 2, 2, "qi")
    assert dep2.predecessor == dep1
    assert dep2.update_cycle == 1
    engine.transition_deployment(dep2.deployment_id, "Staged", "qi")
    engine.transition_deployment(dep2.deployment_id, "Canary", "qi")
    engine.transition_deployment(dep2.deployment_id, "Full", "qi",
                                 approval_ref=review.review_id)
    # promotion retires the predecessor; never two Full at once
    assert engine.get_deployment(dep1).state is DeploymentState.RETIRED
    engine.transition_deployment(dep2.deployment_id, "RolledBack", "qi")
    assert engine.get_deployment(dep1).state is DeploymentState.FULL
    assert engine.get_deployment(dep2.deployment_id).state is DeploymentState.ROLLED_BACK
    # terminal states have no outgoing edges
    assert LEGAL_TRANSITIONS[DeploymentState.ROLLED_BACK] == set()
    with pytest.raises(IllegalTransition):
        engine.transition_deployment(dep2.deployment_id, "Staged", "qi")


def test_redeploy_requires_g3_of_current_cycle(released):
    engine, aid, dep1 = released
    # no G3 at all yet
    with pytest.raises(GateNotApproved):
        engine.register_deployment(aid, 1, 1, "svc")
