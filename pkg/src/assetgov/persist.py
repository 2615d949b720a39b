"""JSON persistence of engine state for the embedded CLI and server storage.

The on-disk format is a plain JSON document (bytes base64-encoded); the
hash chain is re-verified on load so a tampered store is rejected.
"""

from __future__ import annotations

import base64
import json
import os
import tempfile
from collections import OrderedDict, deque
from typing import Optional

from .audit import (ArtifactRevision, AuditEvent, ManifestEntry, ManifestStatus,
                    RetentionAction, RetirementManifest, verify_events)
from .cards import AiCard, CardKind, CardStatus
from .config import EngineConfig
from .engine import AssetState, GovernanceEngine, StreamState
from .errors import StorageFailure
from .gates import (Approval, CheckResult, ChecklistItem, Evidence, GateDecision,
                    GateId, GateReview)
from .lifecycle import Asset, AssetStatus, Stage, TransitionKind, TransitionRecord
from .operation import (AlertStatus, Deployment, DeploymentState, DriftAlert,
                        MetricPoint, RollingZScore, UpdateProposal)
from .roles import Principal, RoleBinding

FORMAT_VERSION = 1


def _b64(data: Optional[bytes]) -> Optional[str]:
    return None if data is None else base64.b64encode(data).decode("ascii")


def _unb64(data: Optional[str]) -> Optional[bytes]:
    return None if data is None else base64.b64decode(data)


def _event_out(e: AuditEvent) -> dict:
    return {"seq": e.seq, "asset_id": e.asset_id, "actor": e.actor, "action": e.action,
            "payload": _b64(e.payload), "prev_hash": e.prev_hash, "hash": e.hash}


def _event_in(d: dict) -> AuditEvent:
    return AuditEvent(seq=d["seq"], asset_id=d["asset_id"], actor=d["actor"],
                      action=d["action"], payload=_unb64(d["payload"]),
                      prev_hash=d["prev_hash"], hash=d["hash"])


def _revision_out(r: ArtifactRevision) -> dict:
    return {"artifact_id": r.artifact_id, "revision": r.revision,
            "content_hash": r.content_hash, "created_at": r.created_at,
            "created_in_event": r.created_in_event, "payload": _b64(r.payload),
            "deleted": r.deleted}


def _revision_in(d: dict) -> ArtifactRevision:
    return ArtifactRevision(artifact_id=d["artifact_id"], revision=d["revision"],
                            content_hash=d["content_hash"], created_at=d["created_at"],
                            created_in_event=d["created_in_event"],
                            payload=_unb64(d["payload"]), deleted=d["deleted"])


def _state_out(s: AssetState) -> dict:
    return {
        "asset": {
            "asset_id": s.asset.asset_id, "name": s.asset.name,
            "description": s.asset.description, "owner": s.asset.owner,
            "current_stage": int(s.asset.current_stage), "status": s.asset.status.value,
            "created_at": s.asset.created_at, "update_cycle": s.asset.update_cycle,
        },
        "transitions": [
            {"asset_id": t.asset_id, "from_stage": int(t.from_stage),
             "to_stage": int(t.to_stage), "kind": t.kind.value, "actor": t.actor,
             "reason": t.reason, "timestamp": t.timestamp}
            for t in s.transitions],
        "bindings": [b.to_dict() for b in s.bindings],
        "cards": {kind.value: [
            {"asset_id": c.asset_id, "kind": c.kind.value, "revision": c.revision,
             "status": c.status.value, "author": c.author, "created_at": c.created_at,
             "fields": c.fields, "approver": c.approver,
             "approval_rationale": c.approval_rationale, "content_hash": c.content_hash}
            for c in revs] for kind, revs in s.cards.items()},
        "reviews": {gate.value: [
            {"review_id": r.review_id, "asset_id": r.asset_id, "gate": r.gate.value,
             "cycle": r.cycle, "decision": r.decision.value, "consumed": r.consumed,
             "opened_by": r.opened_by, "opened_at": r.opened_at,
             "opened_event_seq": r.opened_event_seq,
             "items": [i.to_dict() for i in r.items],
             "approvals": [a.to_dict() for a in r.approvals]}
            for r in revs] for gate, revs in s.reviews.items()},
        "evidence": [
            {"evidence_id": e.evidence_id, "asset_id": e.asset_id,
             "description": e.description, "digest": e.digest,
             "payload": _b64(e.payload), "external_ref": e.external_ref}
            for e in s.evidence.values()],
        "deployments": [d.to_dict() for d in s.deployments.values()],
        "streams": {k: {"last_timestamp": v.last_timestamp, "count": v.count}
                    for k, v in s.streams.items()},
        "alerts": [a.to_dict() for a in s.alerts.values()],
        "proposals": [p.to_dict() for p in s.proposals.values()],
        "manifests": [m.to_dict() for m in s.manifests.values()],
        "events": [_event_out(e) for e in s.events],
        "revisions": {aid: [_revision_out(r) for r in revs]
                      for aid, revs in s.revisions.items()},
        "counters": dict(s.counters),
    }


def _state_in(d: dict) -> AssetState:
    a = d["asset"]
    state = AssetState(asset=Asset(
        asset_id=a["asset_id"], name=a["name"], description=a["description"],
        owner=a["owner"], current_stage=Stage(a["current_stage"]),
        status=AssetStatus(a["status"]), created_at=a["created_at"],
        update_cycle=a["update_cycle"]))
    state.transitions = [
        TransitionRecord(asset_id=t["asset_id"], from_stage=Stage(t["from_stage"]),
                         to_stage=Stage(t["to_stage"]), kind=TransitionKind(t["kind"]),
                         actor=t["actor"], reason=t["reason"], timestamp=t["timestamp"])
        for t in d["transitions"]]
    state.bindings = [RoleBinding(**b) for b in d["bindings"]]
    for kind_name, revs in d["cards"].items():
        kind = CardKind(kind_name)
        state.cards[kind] = [
            AiCard(asset_id=c["asset_id"], kind=kind, revision=c["revision"],
                   status=CardStatus(c["status"]), author=c["author"],
                   created_at=c["created_at"], fields=c["fields"], approver=c["approver"],
                   approval_rationale=c["approval_rationale"],
                   content_hash=c["content_hash"])
            for c in revs]
    for gate_name, revs in d["reviews"].items():
        gate = GateId(gate_name)
        state.reviews[gate] = []
        for r in revs:
            review = GateReview(
                review_id=r["review_id"], asset_id=r["asset_id"], gate=gate,
                cycle=r["cycle"],
                items=[ChecklistItem(item_id=i["item_id"], description=i["description"],
                                     mandatory=i["mandatory"],
                                     result=CheckResult(i["result"]),
                                     evidence_refs=list(i["evidence_refs"]),
                                     checked_by=i["checked_by"])
                       for i in r["items"]],
                decision=GateDecision(r["decision"]),
                approvals=[Approval(**ap) for ap in r["approvals"]],
                opened_by=r["opened_by"], opened_at=r["opened_at"],
                opened_event_seq=r["opened_event_seq"], consumed=r["consumed"])
            state.reviews[gate].append(review)
    for e in d["evidence"]:
        state.evidence[e["evidence_id"]] = Evidence(
            evidence_id=e["evidence_id"], asset_id=e["asset_id"],
            description=e["description"], digest=e["digest"],
            payload=_unb64(e["payload"]), external_ref=e["external_ref"])
    for dep in d["deployments"]:
        state.deployments[dep["deployment_id"]] = Deployment(
            deployment_id=dep["deployment_id"], asset_id=dep["asset_id"],
            model_card_revision=dep["model_card_revision"],
            deployment_card_revision=dep["deployment_card_revision"],
            state=DeploymentState(dep["state"]), canary_fraction=dep["canary_fraction"],
            predecessor=dep["predecessor"],
            authorizing_review_id=dep["authorizing_review_id"],
            update_cycle=dep["update_cycle"])
    for key, v in d["streams"].items():
        state.streams[key] = StreamState(last_timestamp=v["last_timestamp"], count=v["count"])
    for al in d["alerts"]:
        state.alerts[al["alert_id"]] = DriftAlert(
            alert_id=al["alert_id"], asset_id=al["asset_id"],
            deployment_id=al["deployment_id"], rule_id=al["rule_id"],
            metric_name=al["metric_name"], triggered_at=al["triggered_at"],
            observed=al["observed"], window_mean=al["window_mean"],
            window_stddev=al["window_stddev"], window_size=al["window_size"],
            status=AlertStatus(al["status"]), closing_review_id=al["closing_review_id"],
            closing_cycle=al["closing_cycle"])
    for p in d["proposals"]:
        state.proposals[p["proposal_id"]] = UpdateProposal(
            proposal_id=p["proposal_id"], asset_id=p["asset_id"], trigger=p["trigger"],
            opened_by=p["opened_by"], opened_at=p["opened_at"],
            target_cycle=p["target_cycle"], expected_cards=list(p["expected_cards"]))
    for m in d["manifests"]:
        state.manifests[m["manifest_id"]] = RetirementManifest(
            manifest_id=m["manifest_id"], asset_id=m["asset_id"],
            entries=[ManifestEntry(artifact_id=e["artifact_id"], revision=e["revision"],
                                   content_hash=e["content_hash"],
                                   retention_action=RetentionAction(e["retention_action"]),
                                   policy_ref=e["policy_ref"])
                     for e in m["entries"]],
            status=ManifestStatus(m["status"]), uncovered=list(m["uncovered"]))
    state.events = [_event_in(e) for e in d["events"]]
    state.revisions = OrderedDict(
        (aid, [_revision_in(r) for r in revs]) for aid, revs in d["revisions"].items())
    state.counters = dict(d["counters"])
    return state


def engine_to_dict(engine: GovernanceEngine) -> dict:
    windows = {f"{key[0]}::{key[1]}": list(window)
               for key, window in engine._evaluator._windows.items()}
    return {
        "format_version": FORMAT_VERSION,
        "principals": [{"principal_id": p.principal_id, "display_name": p.display_name,
                        "active": p.active} for p in engine.list_principals()],
        "assets": {aid: _state_out(state) for aid, state in engine._states.items()},
        "drift_windows": windows,
    }


def engine_from_dict(doc: dict, config: Optional[EngineConfig] = None,
                     clock=None) -> GovernanceEngine:
    if doc.get("format_version") != FORMAT_VERSION:
        raise StorageFailure(f"unsupported store format {doc.get('format_version')!r}")
    engine = GovernanceEngine(config=config, clock=clock)
    for p in doc["principals"]:
        engine._principals[p["principal_id"]] = Principal(
            principal_id=p["principal_id"], display_name=p["display_name"],
            active=p["active"])
    for aid, raw in doc["assets"].items():
        state = _state_in(raw)
        if verify_events(state.events) != "ok":
            raise StorageFailure(f"audit chain of asset {aid!r} fails verification")
        engine._states[aid] = state
    rules = {r.rule_id: r for r in engine.config.drift_rules}
    for key, values in doc.get("drift_windows", {}).items():
        stream_key, rule_id = key.rsplit("::", 1)
        rule = rules.get(rule_id)
        maxlen = rule.kind.window if rule is not None and isinstance(rule.kind, RollingZScore) else None
        engine._evaluator._windows[(stream_key, rule_id)] = deque(values, maxlen=maxlen)
    return engine


def save_engine(engine: GovernanceEngine, path: str) -> None:
    doc = engine_to_dict(engine)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".assetgov-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise StorageFailure(f"cannot write store {path!r}: {exc}")


def load_engine(path: str, config: Optional[EngineConfig] = None,
                clock=None) -> GovernanceEngine:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        return GovernanceEngine(config=config, clock=clock)
    except (OSError, json.JSONDecodeError) as exc:
        raise StorageFailure(f"cannot read store {path!r}: {exc}")
    return engine_from_dict(doc, config=config, clock=clock)
