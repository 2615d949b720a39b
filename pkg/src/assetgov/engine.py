"""The governance engine: one facade over lifecycle, roles, cards, gates,
operation loop and the audit store.

Every mutating operation validates its preconditions, applies the change
and appends exactly one hash-chained audit event inside the owning
asset's lock, so replaying the ledger reconstructs every transition.
"""

from __future__ import annotations

import copy
import datetime as dt
import re
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from . import canonical
from .audit import (TRACEABILITY_ROWS, ArtifactRevision, AuditEvent, ManifestEntry,
                    ManifestStatus, RetentionAction, RetirementManifest, export_events,
                    make_event, verify_events)
from .cards import (CARD_SECTIONS, DESIGNATED_STAGE, AiCard, CardKind, CardStatus,
                    missing_sections, required_cards)
from .config import EngineConfig
from .errors import (AssetRetired, DuplicateCard, DuplicateId, EmptyName, EmptyRationale,
                     GateNotApproved, IllegalTransition, IncompleteDecisions,
                     InactiveDeployment, ManifestIncomplete, MandatoryItemNotPassed,
                     MissingApprovalRef, MissingEvidence, MissingOrUnapprovedCard,
                     MissingSections,
                     NoSuchCard, NoSuchRevision, NonMonotonicTimestamp, NotAccountable,
                     NotAuthorized, NotEarlierStage, NotPermitted, NotResponsible,
                     ReviewAlreadyOpen, ReviewNotOpen, SoDViolation, StageTooEarly,
                     TerminalStage, UnapprovedCardRevision, UnknownAlert, UnknownAsset,
                     UnknownDeployment, UnknownItem, UnknownPrincipal, UnknownReview,
                     UnknownRole, ValidationError, WrongPhase, WrongStage, WrongStatus)
from .gates import (GATE_STAGE, STAGE_GATE, Approval, CheckResult, ChecklistItem,
                    Evidence, GateDecision, GateId, GateReview)
from .lifecycle import (Asset, AssetStatus, Phase, Stage, TransitionKind,
                        TransitionRecord, phase_of, PHASE_COLORS)
from .operation import (AlertStatus, Deployment, DeploymentState, DriftAlert,
                        DriftEvaluator, LEGAL_TRANSITIONS, MetricPoint, RollingZScore,
                        StaticBounds, UpdateProposal)
from .roles import Principal, RoleBinding, check_sod

SYSTEM_ACTOR = "system"


@dataclass
class StreamState:
    last_timestamp: str = ""
    count: int = 0


@dataclass
class AssetState:
    asset: Asset
    transitions: List[TransitionRecord] = field(default_factory=list)
    bindings: List[RoleBinding] = field(default_factory=list)
    cards: Dict[CardKind, List[AiCard]] = field(default_factory=dict)
    reviews: Dict[GateId, List[GateReview]] = field(default_factory=dict)
    evidence: Dict[str, Evidence] = field(default_factory=dict)
    deployments: "OrderedDict[str, Deployment]" = field(default_factory=OrderedDict)
    streams: Dict[str, StreamState] = field(default_factory=dict)
    alerts: "OrderedDict[str, DriftAlert]" = field(default_factory=OrderedDict)
    proposals: "OrderedDict[str, UpdateProposal]" = field(default_factory=OrderedDict)
    manifests: Dict[str, RetirementManifest] = field(default_factory=dict)
    events: List[AuditEvent] = field(default_factory=list)
    revisions: "OrderedDict[str, List[ArtifactRevision]]" = field(default_factory=OrderedDict)
    counters: Dict[str, int] = field(default_factory=dict)


def _slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    return slug or "asset"


class GovernanceEngine:
    def __init__(self, config: Optional[EngineConfig] = None, clock=None) -> None:
        self.config = config or EngineConfig()
        violations = self.config.validate()
        if violations:
            raise ValidationError("configuration invalid", violations=violations)
        self._clock = clock or (lambda: dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"))
        self._states: Dict[str, AssetState] = {}
        self._principals: Dict[str, Principal] = {}
        self._system_events: List[AuditEvent] = []
        self._system_revisions: "OrderedDict[str, List[ArtifactRevision]]" = OrderedDict()
        self._evaluator = DriftEvaluator()
        self._registry_lock = threading.RLock()
        self._locks: Dict[str, threading.RLock] = {}
        self._snapshot_config()

    # ------------------------------------------------------------------ infra

    def _now(self) -> str:
        return self._clock()

    def _lock(self, asset_id: str) -> threading.RLock:
        with self._registry_lock:
            return self._locks.setdefault(asset_id, threading.RLock())

    def _snapshot_config(self) -> None:
        payload = canonical.canonical_bytes(self.config.to_dict())
        prev = self._system_events[-1].hash if self._system_events else canonical.GENESIS_HASH
        doc = canonical.canonical_bytes({"action": "config.snapshot", "actor": SYSTEM_ACTOR,
                                         "ts": self._now(), "digest": canonical.digest(payload)})
        event = make_event(len(self._system_events) + 1, "_system", SYSTEM_ACTOR,
                           "config.snapshot", doc, prev)
        self._system_events.append(event)
        revs = self._system_revisions.setdefault("config", [])
        revs.append(ArtifactRevision("config", len(revs) + 1, canonical.digest(payload),
                                     self._now(), event.seq, payload))

    def _state(self, asset_id: str) -> AssetState:
        state = self._states.get(asset_id)
        if state is None:
            raise UnknownAsset(f"no asset {asset_id!r}")
        return state

    def _state_for_review(self, review_id: str) -> Tuple[AssetState, GateReview]:
        asset_id = review_id.split(":", 1)[0]
        state = self._states.get(asset_id)
        if state is not None:
            for reviews in state.reviews.values():
                for review in reviews:
                    if review.review_id == review_id:
                        return state, review
        raise UnknownReview(f"no gate review {review_id!r}")

    def _state_for_deployment(self, deployment_id: str) -> Tuple[AssetState, Deployment]:
        asset_id = deployment_id.split(":", 1)[0]
        state = self._states.get(asset_id)
        if state is not None and deployment_id in state.deployments:
            return state, state.deployments[deployment_id]
        raise UnknownDeployment(f"no deployment {deployment_id!r}")

    def _log(self, state: AssetState, actor: str, action: str, data: dict) -> AuditEvent:
        doc = {"action": action, "actor": actor, "ts": self._now(), "data": data}
        payload = canonical.canonical_bytes(doc)
        prev = state.events[-1].hash if state.events else canonical.GENESIS_HASH
        event = make_event(len(state.events) + 1, state.asset.asset_id, actor, action, payload, prev)
        state.events.append(event)
        return event

    def _store_revision(self, state: AssetState, artifact_id: str, payload: bytes,
                        event_seq: int) -> ArtifactRevision:
        revs = state.revisions.setdefault(artifact_id, [])
        rev = ArtifactRevision(artifact_id, len(revs) + 1, canonical.digest(payload),
                               self._now(), event_seq, payload)
        revs.append(rev)
        return rev

    def _next(self, state: AssetState, counter: str) -> int:
        state.counters[counter] = state.counters.get(counter, 0) + 1
        return state.counters[counter]

    # --------------------------------------------------------------- snapshot

    def snapshot_asset(self, asset_id: str) -> AssetState:
        """Deep copy of one asset's whole state (for model-checking harnesses)."""
        return copy.deepcopy(self._state(asset_id))

    def restore_asset(self, asset_id: str, snapshot: AssetState) -> None:
        self._states[asset_id] = copy.deepcopy(snapshot)

    # ------------------------------------------------------------- principals

    def register_principal(self, principal_id: str, display_name: str = "") -> Principal:
        with self._registry_lock:
            if principal_id in self._principals:
                return self._principals[principal_id]
            principal = Principal(principal_id, display_name or principal_id)
            self._principals[principal_id] = principal
            return principal

    def get_principal(self, principal_id: str) -> Principal:
        p = self._principals.get(principal_id)
        if p is None or not p.active:
            raise UnknownPrincipal(f"principal {principal_id!r} is not registered")
        return p

    def list_principals(self) -> List[Principal]:
        return list(self._principals.values())

    # ---------------------------------------------------------- authorization

    def _roles_of(self, state: AssetState, principal_id: str) -> Set[str]:
        return {b.role for b in state.bindings if b.principal_id == principal_id}

    def _is_responsible(self, state: AssetState, principal_id: str, stage: Stage) -> bool:
        entry = self.config.matrix[stage]
        return bool(self._roles_of(state, principal_id) & entry.responsible)

    def _is_accountable(self, state: AssetState, principal_id: str, stage: Stage) -> bool:
        entry = self.config.matrix[stage]
        return entry.accountable in self._roles_of(state, principal_id)

    def is_permitted(self, asset_id: str, principal_id: str, action_kind: str,
                     stage: Union[Stage, int, str]) -> bool:
        state = self._state(asset_id)
        stage = Stage.from_any(stage)
        if action_kind in ("approve", "decide", "retire"):
            return self._is_accountable(state, principal_id, stage)
        if action_kind == "bind":
            return principal_id == state.asset.owner or self._is_accountable(state, principal_id, stage)
        return self._is_responsible(state, principal_id, stage) or \
            self._is_accountable(state, principal_id, stage)

    def responsible_roles(self, stage: Union[Stage, int, str]) -> Tuple[Set[str], str]:
        entry = self.config.matrix[Stage.from_any(stage)]
        return set(entry.responsible), entry.accountable

    def check_sod(self, review_scope: Set[str], approver: str) -> Optional[str]:
        return check_sod(set(review_scope), approver)

    # -------------------------------------------------------------- lifecycle

    def create_asset(self, name: str, description: str, owner: str,
                     asset_id: Optional[str] = None) -> Asset:
        if not name.strip():
            raise EmptyName("asset name must be non-empty")
        self.get_principal(owner)
        with self._registry_lock:
            asset_id = asset_id or _slug(name)
            if asset_id in self._states:
                raise DuplicateId(f"asset {asset_id!r} already exists")
            asset = Asset(asset_id=asset_id, name=name, description=description, owner=owner,
                          current_stage=Stage.I, status=AssetStatus.ACTIVE,
                          created_at=self._now())
            state = AssetState(asset=asset)
            self._states[asset_id] = state
            self._log(state, owner, "asset.create",
                      {"name": name, "description": description, "owner": owner})
            return asset

    def get_asset(self, asset_id: str) -> Asset:
        return self._state(asset_id).asset

    def list_assets(self) -> List[Asset]:
        return [s.asset for s in self._states.values()]

    def _require_active(self, state: AssetState) -> None:
        if state.asset.status is not AssetStatus.ACTIVE:
            raise AssetRetired(
                f"asset {state.asset.asset_id!r} is {state.asset.status.value}; no mutations allowed")

    def _card_approved(self, state: AssetState, kind: CardKind) -> bool:
        return any(c.status is CardStatus.APPROVED for c in state.cards.get(kind, []))

    def _latest_review(self, state: AssetState, gate: GateId) -> Optional[GateReview]:
        reviews = state.reviews.get(gate, [])
        return reviews[-1] if reviews else None

    def _gate_passable(self, state: AssetState, stage: Stage) -> bool:
        gate = STAGE_GATE.get(stage)
        if gate is None:
            return True
        review = self._latest_review(state, gate)
        return review is not None and review.decision is GateDecision.APPROVED and not review.consumed

    def advance(self, asset_id: str, actor: str) -> TransitionRecord:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(actor)
            current = state.asset.current_stage
            if current is Stage.XI:
                raise TerminalStage("stage XI is terminal; use retirement completion")
            if not self._is_responsible(state, actor, current):
                raise NotResponsible(f"{actor!r} holds no responsible role for stage {current.roman}")
            for kind in sorted(required_cards(current), key=lambda k: DESIGNATED_STAGE[k]):
                if not self._card_approved(state, kind):
                    raise MissingOrUnapprovedCard(
                        f"{kind.value} card must be approved before leaving stage {current.roman}",
                        kind=kind.value)
            if not self._gate_passable(state, current):
                raise GateNotApproved(
                    f"gate at stage {current.roman} has no unconsumed approved review")
            gate = STAGE_GATE.get(current)
            if gate is not None:
                review = self._latest_review(state, gate)
                assert review is not None
                review.consumed = True
            target = Stage(current + 1)
            record = TransitionRecord(asset_id, current, target, TransitionKind.ADVANCE,
                                      actor, "", self._now())
            state.asset.current_stage = target
            if current is Stage.X:
                state.asset.update_cycle += 1
                # Entering stage XI is entering retirement.
                state.asset.status = AssetStatus.RETIREMENT_PENDING
            state.transitions.append(record)
            self._log(state, actor, "asset.advance", record.to_dict())
            return record

    def feedback(self, asset_id: str, target: Union[Stage, int, str], actor: str,
                 reason: str) -> TransitionRecord:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(actor)
            target = Stage.from_any(target)
            current = state.asset.current_stage
            if target >= current:
                raise NotEarlierStage(f"feedback target {target.roman} is not earlier than {current.roman}")
            if not self._is_responsible(state, actor, current):
                raise NotResponsible(f"{actor!r} holds no responsible role for stage {current.roman}")
            if not reason.strip():
                raise EmptyRationale("feedback requires a non-empty reason")
            # Leaving stage X with a fresh approved update-gate review completes
            # one operation-loop pass.
            if current is Stage.X:
                review = self._latest_review(state, GateId.G3)
                if review is not None and review.decision is GateDecision.APPROVED \
                        and not review.consumed and review.cycle == state.asset.update_cycle + 1:
                    review.consumed = True
                    state.asset.update_cycle += 1
            invalidated = []
            for stage in Stage:
                if target <= stage < current and stage in STAGE_GATE:
                    review = self._latest_review(state, STAGE_GATE[stage])
                    if review is not None and review.decision is GateDecision.APPROVED:
                        review.decision = GateDecision.REQUIRES_REAPPROVAL
                        invalidated.append(review.review_id)
            record = TransitionRecord(asset_id, current, target, TransitionKind.FEEDBACK,
                                      actor, reason, self._now())
            state.asset.current_stage = target
            state.transitions.append(record)
            data = record.to_dict()
            data["invalidated_reviews"] = invalidated
            self._log(state, actor, "asset.feedback", data)
            return record

    def initiate_retirement(self, asset_id: str, actor: str, reason: str) -> TransitionRecord:
        with self._lock(asset_id):
            state = self._state(asset_id)
            if state.asset.status is not AssetStatus.ACTIVE:
                raise AssetRetired(f"asset already {state.asset.status.value}")
            self.get_principal(actor)
            current = state.asset.current_stage
            if not self._is_accountable(state, actor, current):
                raise NotAccountable(f"{actor!r} does not hold the accountable role for {current.roman}")
            record = TransitionRecord(asset_id, current, Stage.XI, TransitionKind.RETIRE,
                                      actor, reason, self._now())
            state.asset.current_stage = Stage.XI
            state.asset.status = AssetStatus.RETIREMENT_PENDING
            state.transitions.append(record)
            self._log(state, actor, "asset.retire.initiate", record.to_dict())
            return record

    def complete_retirement(self, asset_id: str, manifest_id: str,
                            actor: str = SYSTEM_ACTOR) -> Asset:
        with self._lock(asset_id):
            state = self._state(asset_id)
            if state.asset.status is not AssetStatus.RETIREMENT_PENDING:
                raise WrongStatus(f"asset is {state.asset.status.value}, not RetirementPending")
            manifest = state.manifests.get(manifest_id)
            if manifest is None:
                raise ManifestIncomplete(f"no manifest {manifest_id!r}", uncovered=[])
            uncovered = self._manifest_gaps(state, manifest)
            if uncovered:
                raise ManifestIncomplete("manifest does not cover every stored revision",
                                         uncovered=uncovered)
            manifest.status = ManifestStatus.COMPLETE
            manifest.uncovered = []
            for entry in manifest.entries:
                if entry.retention_action is RetentionAction.DELETE:
                    for rev in state.revisions.get(entry.artifact_id, []):
                        if rev.revision == entry.revision:
                            rev.payload = None
                            rev.deleted = True
            for dep in state.deployments.values():
                if dep.state is DeploymentState.FULL:
                    dep.state = DeploymentState.RETIRED
            state.asset.status = AssetStatus.RETIRED
            self._log(state, actor, "asset.retire.complete", {"manifest_id": manifest_id})
            return state.asset

    def allowed_actions(self, asset_id: str) -> List[dict]:
        state = self._state(asset_id)
        asset = state.asset
        actions: List[dict] = []
        if asset.status is AssetStatus.RETIRED:
            return actions
        current = asset.current_stage
        active = asset.status is AssetStatus.ACTIVE
        if active:
            actions.append({"action": "role.bind"})
            ok = current is not Stage.XI
            for kind in sorted(required_cards(current), key=lambda k: DESIGNATED_STAGE[k]):
                ok = ok and self._card_approved(state, kind)
            ok = ok and self._gate_passable(state, current)
            if ok:
                actions.append({"action": "asset.advance"})
            targets = [s.roman for s in Stage if s < current]
            if targets:
                actions.append({"action": "asset.feedback", "targets": targets})
            for kind in CardKind:
                existing = state.cards.get(kind, [])
                if not existing and current >= DESIGNATED_STAGE[kind]:
                    actions.append({"action": "card.create", "kind": kind.value})
                if existing:
                    actions.append({"action": "card.revise", "kind": kind.value})
                    if existing[-1].status is CardStatus.DRAFT:
                        actions.append({"action": "card.approve", "kind": kind.value})
            gate = STAGE_GATE.get(current)
            if gate is not None:
                review = self._latest_review(state, gate)
                if review is None or review.decision is not GateDecision.OPEN:
                    actions.append({"action": "gate.open", "gate": gate.value})
                if review is not None and review.decision is GateDecision.OPEN:
                    actions.append({"action": "gate.check", "review": review.review_id})
                    actions.append({"action": "gate.decide", "review": review.review_id})
            actions.append({"action": "retirement.initiate"})
            if self._deployment_registrable(state):
                actions.append({"action": "deployment.register"})
        if asset.status is AssetStatus.RETIREMENT_PENDING:
            actions.append({"action": "manifest.build"})
            if any(m.status is ManifestStatus.COMPLETE or not self._manifest_gaps(state, m)
                   for m in state.manifests.values()):
                actions.append({"action": "retirement.complete"})
        for dep in state.deployments.values():
            targets = sorted(s.value for s in LEGAL_TRANSITIONS[dep.state])
            if targets:
                actions.append({"action": "deployment.transition",
                                "deployment": dep.deployment_id, "targets": targets})
        if any(d.state in (DeploymentState.CANARY, DeploymentState.FULL)
               for d in state.deployments.values()):
            actions.append({"action": "metrics.ingest"})
        return actions

    # ------------------------------------------------------------------ roles

    def bind_role(self, asset_id: str, principal_id: str, role: str, actor: str) -> RoleBinding:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(actor)
            self.get_principal(principal_id)
            if role not in self.config.role_catalog:
                raise UnknownRole(f"role {role!r} is not in the catalog")
            current = state.asset.current_stage
            if actor != state.asset.owner and not self._is_accountable(state, actor, current):
                raise NotAuthorized(
                    f"{actor!r} is neither the asset owner nor accountable at {current.roman}")
            for binding in state.bindings:
                if binding.principal_id == principal_id and binding.role == role:
                    return binding
            binding = RoleBinding(asset_id, principal_id, role)
            state.bindings.append(binding)
            self._log(state, actor, "role.bind", binding.to_dict())
            return binding

    def list_bindings(self, asset_id: str) -> List[RoleBinding]:
        return list(self._state(asset_id).bindings)

    # ------------------------------------------------------------------ cards

    def _card(self, state: AssetState, kind: CardKind) -> List[AiCard]:
        revs = state.cards.get(kind)
        if not revs:
            raise NoSuchCard(f"asset {state.asset.asset_id!r} has no {kind.value} card")
        return revs

    def create_card(self, asset_id: str, kind: Union[CardKind, str], author: str,
                    fields: Dict[str, str]) -> AiCard:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(author)
            kind = CardKind.from_any(kind)
            current = state.asset.current_stage
            if current < DESIGNATED_STAGE[kind]:
                raise StageTooEarly(
                    f"{kind.value} card is designated at stage {DESIGNATED_STAGE[kind].roman}; "
                    f"asset is at {current.roman}", kind=kind.value)
            if state.cards.get(kind):
                raise DuplicateCard(f"asset already has a {kind.value} card; revise it instead")
            if not self._is_responsible(state, author, current):
                raise NotPermitted(f"{author!r} holds no responsible role for stage {current.roman}")
            card = AiCard(asset_id=asset_id, kind=kind, revision=1, status=CardStatus.DRAFT,
                          author=author, created_at=self._now(), fields=dict(fields))
            state.cards.setdefault(kind, []).append(card)
            event = self._log(state, author, "card.create",
                              {"kind": kind.value, "revision": 1, "content_hash": card.content_hash})
            self._store_revision(state, f"card:{asset_id}:{kind.value}", card.canonical_doc(),
                                 event.seq)
            return card

    def revise_card(self, asset_id: str, kind: Union[CardKind, str], author: str,
                    fields: Dict[str, str]) -> AiCard:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(author)
            kind = CardKind.from_any(kind)
            revs = self._card(state, kind)
            current = state.asset.current_stage
            if not self._is_responsible(state, author, current):
                raise NotPermitted(f"{author!r} holds no responsible role for stage {current.roman}")
            card = AiCard(asset_id=asset_id, kind=kind, revision=revs[-1].revision + 1,
                          status=CardStatus.DRAFT, author=author, created_at=self._now(),
                          fields=dict(fields))
            revs.append(card)
            event = self._log(state, author, "card.revise",
                              {"kind": kind.value, "revision": card.revision,
                               "content_hash": card.content_hash})
            self._store_revision(state, f"card:{asset_id}:{kind.value}", card.canonical_doc(),
                                 event.seq)
            return card

    def _check_training_data_ref(self, state: AssetState, fields: Dict[str, str]) -> None:
        ref = str(fields.get("training_data_ref", "")).strip()
        match = re.search(r"(\d+)\s*$", ref)
        dataset = state.cards.get(CardKind.DATASET, [])
        if not match or not any(c.revision == int(match.group(1)) for c in dataset):
            raise ValidationError(
                "training_data_ref must reference an existing Dataset card revision "
                "(e.g. 'Dataset@2')", field="training_data_ref")

    def approve_card(self, asset_id: str, kind: Union[CardKind, str], approver: str,
                     rationale: str) -> AiCard:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(approver)
            kind = CardKind.from_any(kind)
            revs = self._card(state, kind)
            latest = revs[-1]
            if latest.status is not CardStatus.DRAFT:
                raise WrongStatus(f"latest {kind.value} revision {latest.revision} is "
                                  f"{latest.status.value}, not Draft")
            if not rationale.strip():
                raise EmptyRationale("card approval requires a rationale")
            current = state.asset.current_stage
            if not self._is_accountable(state, approver, current):
                raise NotPermitted(
                    f"{approver!r} does not hold the accountable role for stage {current.roman}")
            reason = check_sod({latest.author}, approver)
            if reason:
                raise SoDViolation(reason, authors=[latest.author])
            missing = missing_sections(kind, latest.fields)
            if missing:
                raise MissingSections(f"{kind.value} card has empty mandatory sections",
                                      sections=missing)
            if kind is CardKind.MODEL:
                self._check_training_data_ref(state, latest.fields)
            for older in revs[:-1]:
                if older.status is not CardStatus.SUPERSEDED:
                    older.status = CardStatus.SUPERSEDED
            latest.status = CardStatus.APPROVED
            latest.approver = approver
            latest.approval_rationale = rationale
            self._log(state, approver, "card.approve",
                      {"kind": kind.value, "revision": latest.revision, "rationale": rationale})
            return latest

    def get_card(self, asset_id: str, kind: Union[CardKind, str],
                 revision: Optional[int] = None) -> AiCard:
        state = self._state(asset_id)
        revs = self._card(state, CardKind.from_any(kind))
        if revision is None:
            return revs[-1]
        for card in revs:
            if card.revision == revision:
                return card
        raise NoSuchRevision(f"no revision {revision} of {CardKind.from_any(kind).value} card")

    def render_card(self, asset_id: str, kind: Union[CardKind, str], revision: int,
                    format: str = "canonical") -> bytes:
        card = self.get_card(asset_id, kind, revision)
        if format == "markdown":
            return card.markdown_doc()
        return card.canonical_doc()

    def required_cards(self, stage: Union[Stage, int, str]) -> Set[CardKind]:
        return required_cards(Stage.from_any(stage))

    # ------------------------------------------------------------------ gates

    def open_gate_review(self, asset_id: str, gate: Union[GateId, str], actor: str) -> GateReview:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(actor)
            gate = GateId.from_any(gate)
            stage = GATE_STAGE[gate]
            if state.asset.current_stage is not stage:
                raise WrongStage(f"gate {gate.value} sits at stage {stage.roman}; asset is at "
                                 f"{state.asset.current_stage.roman}")
            latest = self._latest_review(state, gate)
            if latest is not None and latest.decision is GateDecision.OPEN:
                raise ReviewAlreadyOpen(f"review {latest.review_id} is still open")
            if not self._is_responsible(state, actor, stage):
                raise NotPermitted(f"{actor!r} holds no responsible role for stage {stage.roman}")
            cycle = (latest.cycle + 1) if latest is not None else 1
            items = [ChecklistItem(item_id=i["item_id"], description=i.get("description", ""),
                                   mandatory=bool(i.get("mandatory", True)))
                     for i in self.config.checklists[gate]]
            review = GateReview(review_id=f"{asset_id}:{gate.value}:{cycle}", asset_id=asset_id,
                                gate=gate, cycle=cycle, items=items, opened_by=actor,
                                opened_at=self._now())
            state.reviews.setdefault(gate, []).append(review)
            event = self._log(state, actor, "gate.open",
                              {"gate": gate.value, "cycle": cycle, "review": review.review_id})
            review.opened_event_seq = event.seq
            return review

    def attach_evidence(self, asset_id: str, description: str, payload: bytes, actor: str,
                        external_ref: str = "") -> Evidence:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(actor)
            dg = canonical.digest(payload)
            evidence_id = f"ev-{dg[:16]}"
            if evidence_id in state.evidence:
                return state.evidence[evidence_id]
            evidence = Evidence(evidence_id=evidence_id, asset_id=asset_id,
                                description=description, digest=dg, payload=payload,
                                external_ref=external_ref)
            state.evidence[evidence_id] = evidence
            event = self._log(state, actor, "evidence.attach",
                              {"evidence_id": evidence_id, "digest": dg,
                               "description": description})
            self._store_revision(state, f"evidence:{asset_id}:{evidence_id}", payload, event.seq)
            return evidence

    def record_check(self, review_id: str, item_id: str, result: str,
                     evidence_refs: Sequence[str], actor: str) -> ChecklistItem:
        state, review = self._state_for_review(review_id)
        with self._lock(state.asset.asset_id):
            self._require_active(state)
            self.get_principal(actor)
            if review.decision is not GateDecision.OPEN:
                raise ReviewNotOpen(f"review {review_id} is {review.decision.value}")
            item = review.item(item_id)
            if item is None:
                raise UnknownItem(f"review {review_id} has no item {item_id!r}")
            stage = GATE_STAGE[review.gate]
            if not self._is_responsible(state, actor, stage):
                raise NotPermitted(f"{actor!r} holds no responsible role for stage {stage.roman}")
            missing = [ref for ref in evidence_refs if ref not in state.evidence]
            if missing:
                raise MissingEvidence("unknown evidence references", refs=missing)
            verdict = CheckResult.PASS if str(result).strip().lower() == "pass" else \
                CheckResult.FAIL if str(result).strip().lower() == "fail" else None
            if verdict is None:
                raise ValidationError(f"check result must be Pass or Fail, got {result!r}")
            item.result = verdict
            item.evidence_refs = list(evidence_refs)
            item.checked_by = actor
            self._log(state, actor, "gate.check",
                      {"review": review_id, "item": item_id, "result": verdict.value,
                       "evidence_refs": list(evidence_refs)})
            return item

    def _decision_scope(self, state: AssetState, review: GateReview) -> Set[str]:
        scope: Set[str] = set()
        for kind in required_cards(GATE_STAGE[review.gate]):
            revs = state.cards.get(kind, [])
            if revs:
                scope.add(revs[-1].author)
        for item in review.items:
            if item.checked_by:
                scope.add(item.checked_by)
        for event in state.events:
            if event.seq >= review.opened_event_seq and event.actor != SYSTEM_ACTOR:
                scope.add(event.actor)
        return scope

    def decide_gate(self, review_id: str, approver: str, verdict: str,
                    rationale: str) -> GateReview:
        state, review = self._state_for_review(review_id)
        with self._lock(state.asset.asset_id):
            self._require_active(state)
            self.get_principal(approver)
            if review.decision is not GateDecision.OPEN:
                raise ReviewNotOpen(f"review {review_id} is {review.decision.value}")
            if not rationale.strip():
                raise EmptyRationale("gate decisions require a rationale")
            verdict_norm = str(verdict).strip().lower()
            if verdict_norm not in ("approve", "reject"):
                raise ValidationError(f"verdict must be Approve or Reject, got {verdict!r}")
            stage = GATE_STAGE[review.gate]
            if not self._is_accountable(state, approver, stage):
                raise NotAccountable(
                    f"{approver!r} does not hold the accountable role for stage {stage.roman}")
            if verdict_norm == "approve":
                unpassed = review.mandatory_unpassed()
                if unpassed:
                    raise MandatoryItemNotPassed("mandatory checklist items not passed",
                                                 items=unpassed)
                scope = self._decision_scope(state, review)
                reason = check_sod(scope, approver)
                if reason:
                    raise SoDViolation(reason, scope=sorted(scope))
                review.decision = GateDecision.APPROVED
            else:
                review.decision = GateDecision.REJECTED
            role = self.config.matrix[stage].accountable
            review.approvals.append(Approval(principal=approver, role=role,
                                             verdict=review.decision.value,
                                             rationale=rationale, timestamp=self._now()))
            event = self._log(state, approver, "gate.decide",
                              {"review": review_id, "verdict": review.decision.value,
                               "rationale": rationale})
            self._store_revision(state, f"gate:{state.asset.asset_id}:{review.gate.value}",
                                 canonical.canonical_bytes(review.to_dict()), event.seq)
            return review

    def gate_status(self, asset_id: str, gate: Union[GateId, str]) -> dict:
        state = self._state(asset_id)
        gate = GateId.from_any(gate)
        review = self._latest_review(state, gate)
        if review is None:
            return {"gate": gate.value, "stage": GATE_STAGE[gate].roman,
                    "decision": "NeverOpened", "cycle": 0, "items": []}
        return {
            "gate": gate.value,
            "stage": GATE_STAGE[gate].roman,
            "decision": review.decision.value,
            "cycle": review.cycle,
            "review_id": review.review_id,
            "consumed": review.consumed,
            "items": [{"item_id": i.item_id, "result": i.result.value, "mandatory": i.mandatory}
                      for i in review.items],
        }

    def get_review(self, review_id: str) -> GateReview:
        return self._state_for_review(review_id)[1]

    def default_checklist(self, gate: Union[GateId, str]) -> List[dict]:
        return [dict(i) for i in self.config.checklists[GateId.from_any(gate)]]

    # -------------------------------------------------------------- operation

    def _deployment_registrable(self, state: AssetState) -> bool:
        if not state.deployments:
            review = self._latest_review(state, GateId.G2)
            return review is not None and review.decision is GateDecision.APPROVED
        review = self._latest_review(state, GateId.G3)
        return (review is not None and review.decision is GateDecision.APPROVED
                and review.cycle == state.asset.update_cycle + 1)

    def register_deployment(self, asset_id: str, model_card_revision: int,
                            deployment_card_revision: int, actor: str) -> Deployment:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(actor)
            current = state.asset.current_stage
            if not (self._is_responsible(state, actor, current)
                    or self._is_accountable(state, actor, current)):
                raise NotPermitted(f"{actor!r} holds no role for stage {current.roman}")
            if not state.deployments:
                review = self._latest_review(state, GateId.G2)
                if review is None or review.decision is not GateDecision.APPROVED:
                    raise GateNotApproved("initial release requires an approved G2 review")
            else:
                review = self._latest_review(state, GateId.G3)
                if review is None or review.decision is not GateDecision.APPROVED \
                        or review.cycle != state.asset.update_cycle + 1:
                    raise GateNotApproved(
                        "redeployment requires an approved G3 review for the current update cycle")
            for kind, revision in ((CardKind.MODEL, model_card_revision),
                                   (CardKind.DEPLOYMENT, deployment_card_revision)):
                card = self.get_card(asset_id, kind, revision)
                if card.status is not CardStatus.APPROVED:
                    raise UnapprovedCardRevision(
                        f"{kind.value} card revision {revision} is {card.status.value}, not Approved",
                        kind=kind.value, revision=revision)
            predecessor = next((d.deployment_id for d in state.deployments.values()
                                if d.state is DeploymentState.FULL), None)
            deployment_id = f"{asset_id}:dep-{self._next(state, 'deployment')}"
            deployment = Deployment(
                deployment_id=deployment_id, asset_id=asset_id,
                model_card_revision=model_card_revision,
                deployment_card_revision=deployment_card_revision,
                predecessor=predecessor, authorizing_review_id=review.review_id,
                update_cycle=state.asset.update_cycle + (1 if state.deployments else 0))
            state.deployments[deployment_id] = deployment
            event = self._log(state, actor, "deploy.register", deployment.to_dict())
            self._store_revision(state, f"deployment:{deployment_id}",
                                 canonical.canonical_bytes(deployment.to_dict()), event.seq)
            return deployment

    def transition_deployment(self, deployment_id: str, target: Union[DeploymentState, str],
                              actor: str, approval_ref: Optional[str] = None,
                              canary_fraction: Optional[float] = None) -> Deployment:
        state, deployment = self._state_for_deployment(deployment_id)
        with self._lock(state.asset.asset_id):
            self.get_principal(actor)
            target = DeploymentState.from_any(target)
            current = deployment.state
            stage = state.asset.current_stage
            if not (self._is_responsible(state, actor, stage)
                    or self._is_accountable(state, actor, stage)
                    or actor == state.asset.owner):
                raise NotPermitted(f"{actor!r} holds no role for stage {stage.roman}")
            if target not in LEGAL_TRANSITIONS[current]:
                raise IllegalTransition(f"no edge {current.value} -> {target.value}",
                                        from_state=current.value, to_state=target.value)
            if target is DeploymentState.CANARY:
                fraction = 0.1 if canary_fraction is None else float(canary_fraction)
                if not 0.0 < fraction <= 1.0:
                    raise ValidationError(f"canary fraction must be in (0, 1], got {fraction}")
                deployment.canary_fraction = fraction
            if target is DeploymentState.FULL:
                if not approval_ref:
                    raise MissingApprovalRef("full promotion requires the authorizing gate review")
                if approval_ref != deployment.authorizing_review_id:
                    raise GateNotApproved(
                        f"{approval_ref!r} did not authorize deployment {deployment_id}")
                review = self.get_review(approval_ref)
                if review.decision is not GateDecision.APPROVED:
                    raise GateNotApproved(f"review {approval_ref} is {review.decision.value}")
                for other in state.deployments.values():
                    if other.deployment_id != deployment_id and other.state is DeploymentState.FULL:
                        other.state = DeploymentState.RETIRED
                self._close_alerts_for(state, deployment)
            if target is DeploymentState.ROLLED_BACK and current is DeploymentState.FULL \
                    and deployment.predecessor:
                pred = state.deployments.get(deployment.predecessor)
                # only undo the automatic retirement caused by this deployment's
                # promotion; a predecessor that was rolled back stays rolled back
                if pred is not None and pred.state is DeploymentState.RETIRED:
                    pred.state = DeploymentState.FULL
            deployment.state = target
            event = self._log(state, actor, "deploy.transition",
                              {"deployment": deployment_id, "from": current.value,
                               "to": target.value, "approval_ref": approval_ref,
                               "canary_fraction": deployment.canary_fraction})
            self._store_revision(state, f"deployment:{deployment_id}",
                                 canonical.canonical_bytes(deployment.to_dict()), event.seq)
            return deployment

    def _close_alerts_for(self, state: AssetState, deployment: Deployment) -> None:
        if deployment.update_cycle <= 0:
            return
        triggers = {p.trigger for p in state.proposals.values()
                    if p.target_cycle == deployment.update_cycle}
        for alert in state.alerts.values():
            if alert.alert_id in triggers and alert.status is AlertStatus.ACKNOWLEDGED:
                alert.status = AlertStatus.CLOSED_BY_UPDATE
                alert.closing_review_id = deployment.authorizing_review_id
                alert.closing_cycle = deployment.update_cycle
                self._log(state, SYSTEM_ACTOR, "alert.close",
                          {"alert": alert.alert_id, "review": deployment.authorizing_review_id,
                           "cycle": deployment.update_cycle})

    def get_deployment(self, deployment_id: str) -> Deployment:
        return self._state_for_deployment(deployment_id)[1]

    def list_deployments(self, asset_id: str) -> List[Deployment]:
        return list(self._state(asset_id).deployments.values())

    def ingest_metrics(self, points: Sequence[Union[MetricPoint, dict]]) -> int:
        parsed: List[MetricPoint] = []
        for raw in points:
            if isinstance(raw, MetricPoint):
                parsed.append(raw)
            else:
                parsed.append(MetricPoint(asset_id=raw.get("asset_id", ""),
                                          deployment_id=raw["deployment_id"],
                                          metric_name=raw["metric_name"],
                                          value=float(raw["value"]),
                                          timestamp=str(raw["timestamp"])))
        # Validate the whole batch before any effect.
        last_seen: Dict[str, str] = {}
        for point in parsed:
            state, deployment = self._state_for_deployment(point.deployment_id)
            if not point.asset_id:
                point.asset_id = state.asset.asset_id
            if deployment.state not in (DeploymentState.CANARY, DeploymentState.FULL):
                raise InactiveDeployment(
                    f"deployment {point.deployment_id} is {deployment.state.value}; "
                    "metrics require Canary or Full")
            key = f"{point.deployment_id}|{point.metric_name}"
            prev = last_seen.get(key) or state.streams.get(key, StreamState()).last_timestamp
            if prev and point.timestamp < prev:
                raise NonMonotonicTimestamp(
                    f"timestamp regression in stream {key}: {point.timestamp} < {prev}")
            last_seen[key] = point.timestamp
        per_asset: Dict[str, List[MetricPoint]] = {}
        for point in parsed:
            per_asset.setdefault(point.asset_id, []).append(point)
        for asset_id, batch in per_asset.items():
            with self._lock(asset_id):
                state = self._state(asset_id)
                fired: List[DriftAlert] = []
                for point in batch:
                    key = f"{point.deployment_id}|{point.metric_name}"
                    stream = state.streams.setdefault(key, StreamState())
                    stream.last_timestamp = point.timestamp
                    stream.count += 1
                    for rule in self.config.drift_rules:
                        if rule.metric_name != point.metric_name:
                            continue
                        finding = self._evaluator.observe(key, rule, point.value)
                        if not finding.fired:
                            continue
                        if any(a.rule_id == rule.rule_id
                               and a.deployment_id == point.deployment_id
                               and a.status is AlertStatus.OPEN
                               for a in state.alerts.values()):
                            continue
                        alert = DriftAlert(
                            alert_id=f"{asset_id}:alert-{self._next(state, 'alert')}",
                            asset_id=asset_id, deployment_id=point.deployment_id,
                            rule_id=rule.rule_id, metric_name=point.metric_name,
                            triggered_at=point.timestamp, observed=point.value,
                            window_mean=finding.window_mean,
                            window_stddev=finding.window_stddev,
                            window_size=finding.window_size)
                        state.alerts[alert.alert_id] = alert
                        fired.append(alert)
                self._log(state, SYSTEM_ACTOR, "metrics.ingest",
                          {"count": len(batch), "alerts": [a.alert_id for a in fired]})
                for alert in fired:
                    self._log(state, SYSTEM_ACTOR, "alert.open", alert.to_dict())
        return len(parsed)

    def evaluate_rules(self, asset_id: str) -> List[DriftAlert]:
        state = self._state(asset_id)
        order = {AlertStatus.OPEN: 0, AlertStatus.ACKNOWLEDGED: 1, AlertStatus.CLOSED_BY_UPDATE: 2}
        return sorted(state.alerts.values(), key=lambda a: (order[a.status], a.alert_id))

    def open_update_proposal(self, asset_id: str, trigger: str, actor: str) -> UpdateProposal:
        with self._lock(asset_id):
            state = self._state(asset_id)
            self._require_active(state)
            self.get_principal(actor)
            current = state.asset.current_stage
            if phase_of(current) is not Phase.OPERATION:
                raise WrongPhase(f"update proposals require the operation phase; asset is at "
                                 f"{current.roman}")
            if not self._is_responsible(state, actor, current):
                raise NotPermitted(f"{actor!r} holds no responsible role for stage {current.roman}")
            if trigger != "manual":
                alert = state.alerts.get(trigger)
                if alert is None:
                    raise UnknownAlert(f"no alert {trigger!r}")
                if alert.status is AlertStatus.OPEN:
                    alert.status = AlertStatus.ACKNOWLEDGED
                    self._log(state, actor, "alert.ack", {"alert": trigger})
            expected = []
            for kind in (CardKind.MODEL, CardKind.DEPLOYMENT):
                revs = state.cards.get(kind, [])
                if revs:
                    expected.append(f"{kind.value}@{revs[-1].revision + 1}")
            proposal = UpdateProposal(
                proposal_id=f"{asset_id}:prop-{self._next(state, 'proposal')}",
                asset_id=asset_id, trigger=trigger, opened_by=actor, opened_at=self._now(),
                target_cycle=state.asset.update_cycle + 1, expected_cards=expected)
            state.proposals[proposal.proposal_id] = proposal
            self._log(state, actor, "proposal.open", proposal.to_dict())
            return proposal

    # ------------------------------------------------------------------ audit

    def audit_events(self, asset_id: str) -> List[AuditEvent]:
        return list(self._state(asset_id).events)

    def verify_chain(self, asset_id: str) -> Union[str, int]:
        return verify_events(self._state(asset_id).events)

    def export_ledger(self, asset_id: str) -> bytes:
        return export_events(self._state(asset_id).events)

    def list_revisions(self, asset_id: str) -> List[ArtifactRevision]:
        state = self._state(asset_id)
        out: List[ArtifactRevision] = []
        for revs in state.revisions.values():
            out.extend(revs)
        return out

    def get_revision(self, artifact_id: str, revision: int) -> Tuple[bytes, ArtifactRevision]:
        for pool in [self._system_revisions] + [s.revisions for s in self._states.values()]:
            revs = pool.get(artifact_id)
            if revs:
                for rev in revs:
                    if rev.revision == revision:
                        return rev.read_bytes(), rev
                raise NoSuchRevision(f"{artifact_id} has no revision {revision}")
        raise NoSuchRevision(f"no artifact {artifact_id!r}")

    def _manifest_gaps(self, state: AssetState, manifest: RetirementManifest) -> List[str]:
        stored = {(aid, rev.revision) for aid, revs in state.revisions.items() for rev in revs}
        decided = {(e.artifact_id, e.revision) for e in manifest.entries if e.policy_ref.strip()}
        return sorted(f"{aid}@{rev}" for aid, rev in stored - decided)

    def build_retirement_manifest(self, asset_id: str, retention_decisions: Sequence[dict],
                                  actor: str = SYSTEM_ACTOR,
                                  allow_partial: bool = False) -> RetirementManifest:
        with self._lock(asset_id):
            state = self._state(asset_id)
            if state.asset.status is not AssetStatus.RETIREMENT_PENDING:
                raise WrongStatus(f"asset is {state.asset.status.value}, not RetirementPending")
            stored: Dict[Tuple[str, int], ArtifactRevision] = {
                (aid, rev.revision): rev for aid, revs in state.revisions.items() for rev in revs}
            entries: List[ManifestEntry] = []
            for decision in retention_decisions:
                key = (decision["artifact_id"], int(decision["revision"]))
                rev = stored.get(key)
                if rev is None:
                    raise ValidationError(f"decision for unknown revision {key[0]}@{key[1]}")
                entries.append(ManifestEntry(
                    artifact_id=key[0], revision=key[1], content_hash=rev.content_hash,
                    retention_action=RetentionAction.from_any(decision["retention_action"]),
                    policy_ref=str(decision.get("policy_ref", ""))))
            manifest = RetirementManifest(
                manifest_id=f"{asset_id}:manifest-{self._next(state, 'manifest')}",
                asset_id=asset_id, entries=entries, status=ManifestStatus.DRAFT)
            manifest.uncovered = self._manifest_gaps(state, manifest)
            if not manifest.uncovered and all(e.policy_ref.strip() for e in entries):
                manifest.status = ManifestStatus.COMPLETE
            elif not allow_partial:
                raise IncompleteDecisions("retention decisions incomplete",
                                          uncovered=manifest.uncovered)
            state.manifests[manifest.manifest_id] = manifest
            self._log(state, actor, "manifest.build",
                      {"manifest_id": manifest.manifest_id, "status": manifest.status.value,
                       "entries": len(entries), "uncovered": manifest.uncovered})
            return manifest

    def get_manifest(self, asset_id: str, manifest_id: str) -> RetirementManifest:
        state = self._state(asset_id)
        manifest = state.manifests.get(manifest_id)
        if manifest is None:
            raise NoSuchRevision(f"no manifest {manifest_id!r}")
        return manifest

    def traceability_report(self, asset_id: str) -> dict:
        state = self._state(asset_id)
        elements: Dict[str, List[str]] = {row[0]: [] for row in TRACEABILITY_ROWS}
        elements["DR1"] = [f"{b.principal_id} as {b.role}" for b in state.bindings]
        elements["DR2"] = [f"{t.from_stage.roman} -> {t.to_stage.roman} ({t.kind.value})"
                           for t in state.transitions]
        elements["DR3"] = [f"{t.from_stage.roman} -> XI ({t.actor})" for t in state.transitions
                           if t.kind is TransitionKind.RETIRE]
        elements["DR3"] += [f"manifest {m.manifest_id} ({m.status.value})"
                            for m in state.manifests.values()]
        cpps_items = {"cpps-boundaries", "data-availability", "deployment-design",
                      "lab-tests", "pilot-tests", "monitoring-evidence"}
        for reviews in state.reviews.values():
            for review in reviews:
                for item in review.items:
                    if item.item_id in cpps_items and item.result is not CheckResult.PENDING:
                        elements["DR4"].append(
                            f"{review.gate.value}#{review.cycle} {item.item_id}: {item.result.value}")
        for review in state.reviews.get(GateId.G3, []):
            elements["DR5"].append(f"G3 cycle {review.cycle}: {review.decision.value}")
        for kind in (CardKind.MODEL, CardKind.DEPLOYMENT):
            for card in state.cards.get(kind, []):
                elements["DR5"].append(f"{kind.value} card rev {card.revision} ({card.status.value})")
        for kind, revs in state.cards.items():
            elements["DR6"].append(f"{kind.value} card ({len(revs)} revisions)")
        for reviews in state.reviews.values():
            for review in reviews:
                checked = sum(1 for i in review.items if i.result is not CheckResult.PENDING)
                elements["DR6"].append(
                    f"{review.gate.value}#{review.cycle}: {checked}/{len(review.items)} tasks recorded")
                elements["DR7"].append(
                    f"{review.gate.value} cycle {review.cycle}: {review.decision.value}")
        for eid in state.evidence:
            elements["DR6"].append(f"evidence {eid}")
        rows = [{"id": rid, "requirement": summary, "addressed_in": addressed,
                 "model_elements": cats, "asset_elements": elements[rid]}
                for rid, summary, addressed, cats in TRACEABILITY_ROWS]
        return {"asset_id": asset_id, "rows": rows}

    # ------------------------------------------------------------------ board

    def board_feed(self) -> dict:
        columns = []
        for stage in Stage:
            phase = phase_of(stage)
            columns.append({
                "stage": stage.roman,
                "ordinal": int(stage),
                "name": self.config.stage_names[stage],
                "phase": phase.value,
                "color": PHASE_COLORS[phase],
                "gate": STAGE_GATE[stage].value if stage in STAGE_GATE else None,
            })
        tiles = []
        for state in self._states.values():
            asset = state.asset
            gates = {}
            for gate in GateId:
                review = self._latest_review(state, gate)
                if review is not None:
                    gates[gate.value] = review.decision.value
            open_alerts = sum(1 for a in state.alerts.values() if a.status is AlertStatus.OPEN)
            tiles.append({
                "asset_id": asset.asset_id,
                "name": asset.name,
                "stage": asset.current_stage.roman,
                "ordinal": int(asset.current_stage),
                "phase": phase_of(asset.current_stage).value,
                "status": asset.status.value,
                "update_cycle": asset.update_cycle,
                "gates": gates,
                "open_alerts": open_alerts,
            })
        return {"columns": columns, "assets": tiles}
