"""HTTP service exposing every engine operation.

Principals arrive via the trusted `X-Principal` header (reverse-proxy
model, no built-in auth). Mutating endpoints honor an `Idempotency-Key`
header: a repeated key replays the original response without touching
the engine again. Error codes mirror the in-process errors exactly.
"""

from __future__ import annotations

import base64
from typing import Any, Dict, Optional

from fastapi import Body, FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.middleware.base import BaseHTTPMiddleware

from .cards import CARD_SECTIONS, DESIGNATED_STAGE
from .config import EngineConfig
from .engine import GovernanceEngine
from .errors import GovernanceError, ValidationError
from .gates import GATE_STAGE, GateId
from .lifecycle import PHASE_COLORS, Stage, phase_of
from .operation import LEGAL_TRANSITIONS
from .persist import save_engine


def asset_to_dict(engine: GovernanceEngine, asset) -> dict:
    phase = phase_of(asset.current_stage)
    return {
        "asset_id": asset.asset_id,
        "name": asset.name,
        "description": asset.description,
        "owner": asset.owner,
        "current_stage": asset.current_stage.roman,
        "ordinal": int(asset.current_stage),
        "stage_name": engine.config.stage_names[asset.current_stage],
        "phase": phase.value,
        "color": PHASE_COLORS[phase],
        "status": asset.status.value,
        "created_at": asset.created_at,
        "update_cycle": asset.update_cycle,
    }


def _need(payload: Dict[str, Any], key: str) -> Any:
    if key not in payload:
        raise ValidationError(f"missing field {key!r}")
    return payload[key]


class IdempotencyMiddleware(BaseHTTPMiddleware):
    def __init__(self, app, cache: Dict[str, tuple]) -> None:
        super().__init__(app)
        self._cache = cache

    async def dispatch(self, request: Request, call_next):
        key = request.headers.get("Idempotency-Key")
        if not key or request.method not in ("POST", "PUT"):
            return await call_next(request)
        cached = self._cache.get(key)
        if cached is not None:
            status, body, media = cached
            return Response(content=body, status_code=status, media_type=media)
        response = await call_next(request)
        body = b"".join([chunk async for chunk in response.body_iterator])
        self._cache[key] = (response.status_code, body, response.media_type)
        return Response(content=body, status_code=response.status_code,
                        media_type=response.media_type)


def create_app(engine: GovernanceEngine, store_path: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="assetgov", version="0.1.0")
    app.state.engine = engine
    app.add_middleware(IdempotencyMiddleware, cache={})

    def persist() -> None:
        if store_path:
            save_engine(engine, store_path)

    @app.exception_handler(GovernanceError)
    async def governance_error(_request: Request, exc: GovernanceError) -> JSONResponse:
        return JSONResponse(status_code=exc.http_status, content=exc.to_dict())

    def principal_of(x_principal: Optional[str]) -> str:
        if not x_principal:
            raise ValidationError("X-Principal header is required for this operation")
        return x_principal

    # ------------------------------------------------------------- principals

    @app.post("/principals")
    def register_principal(payload: dict = Body(...)):
        p = engine.register_principal(_need(payload, "principal_id"),
                                      payload.get("display_name", ""))
        persist()
        return {"principal_id": p.principal_id, "display_name": p.display_name}

    @app.get("/principals")
    def list_principals():
        return [{"principal_id": p.principal_id, "display_name": p.display_name,
                 "active": p.active} for p in engine.list_principals()]

    # ----------------------------------------------------------------- assets

    @app.post("/assets", status_code=201)
    def create_asset(payload: dict = Body(...),
                     x_principal: Optional[str] = Header(default=None)):
        owner = payload.get("owner") or principal_of(x_principal)
        asset = engine.create_asset(_need(payload, "name"), payload.get("description", ""),
                                    owner, asset_id=payload.get("asset_id"))
        persist()
        return asset_to_dict(engine, asset)

    @app.get("/assets")
    def list_assets():
        return [asset_to_dict(engine, a) for a in engine.list_assets()]

    @app.get("/assets/{asset_id}")
    def get_asset(asset_id: str):
        out = asset_to_dict(engine, engine.get_asset(asset_id))
        out["allowed_actions"] = engine.allowed_actions(asset_id)
        return out

    @app.post("/assets/{asset_id}/advance")
    def advance(asset_id: str, x_principal: Optional[str] = Header(default=None)):
        record = engine.advance(asset_id, principal_of(x_principal))
        persist()
        return record.to_dict()

    @app.post("/assets/{asset_id}/feedback")
    def feedback(asset_id: str, payload: dict = Body(...),
                 x_principal: Optional[str] = Header(default=None)):
        record = engine.feedback(asset_id, _need(payload, "target"),
                                 principal_of(x_principal), payload.get("reason", ""))
        persist()
        return record.to_dict()

    @app.post("/assets/{asset_id}/retire")
    def retire(asset_id: str, payload: dict = Body(default={}),
               x_principal: Optional[str] = Header(default=None)):
        record = engine.initiate_retirement(asset_id, principal_of(x_principal),
                                            payload.get("reason", ""))
        persist()
        return record.to_dict()

    @app.post("/assets/{asset_id}/retire/complete")
    def retire_complete(asset_id: str, payload: dict = Body(...),
                        x_principal: Optional[str] = Header(default=None)):
        asset = engine.complete_retirement(asset_id, _need(payload, "manifest_id"),
                                           actor=principal_of(x_principal))
        persist()
        return asset_to_dict(engine, asset)

    @app.post("/assets/{asset_id}/retirement-manifest")
    def build_manifest(asset_id: str, payload: dict = Body(...),
                       x_principal: Optional[str] = Header(default=None)):
        manifest = engine.build_retirement_manifest(
            asset_id, _need(payload, "decisions"), actor=principal_of(x_principal),
            allow_partial=bool(payload.get("allow_partial", False)))
        persist()
        return manifest.to_dict()

    @app.post("/assets/{asset_id}/roles")
    def bind_role(asset_id: str, payload: dict = Body(...),
                  x_principal: Optional[str] = Header(default=None)):
        binding = engine.bind_role(asset_id, _need(payload, "principal_id"),
                                   _need(payload, "role"), principal_of(x_principal))
        persist()
        return binding.to_dict()

    @app.get("/assets/{asset_id}/roles")
    def list_roles(asset_id: str):
        return [b.to_dict() for b in engine.list_bindings(asset_id)]

    # ------------------------------------------------------------------ cards

    @app.post("/assets/{asset_id}/cards", status_code=201)
    def create_card(asset_id: str, payload: dict = Body(...),
                    x_principal: Optional[str] = Header(default=None)):
        card = engine.create_card(asset_id, _need(payload, "kind"),
                                  principal_of(x_principal), payload.get("fields", {}))
        persist()
        return card.to_dict()

    @app.put("/assets/{asset_id}/cards/{kind}")
    def revise_card(asset_id: str, kind: str, payload: dict = Body(...),
                    x_principal: Optional[str] = Header(default=None)):
        card = engine.revise_card(asset_id, kind, principal_of(x_principal),
                                  payload.get("fields", {}))
        persist()
        return card.to_dict()

    @app.post("/assets/{asset_id}/cards/{kind}/approve")
    def approve_card(asset_id: str, kind: str, payload: dict = Body(...),
                     x_principal: Optional[str] = Header(default=None)):
        card = engine.approve_card(asset_id, kind, principal_of(x_principal),
                                   payload.get("rationale", ""))
        persist()
        return card.to_dict()

    @app.get("/assets/{asset_id}/cards/{kind}")
    def card_history(asset_id: str, kind: str):
        state_cards = []
        latest = engine.get_card(asset_id, kind)
        for rev in range(1, latest.revision + 1):
            state_cards.append(engine.get_card(asset_id, kind, rev).to_dict())
        return state_cards

    @app.get("/assets/{asset_id}/cards/{kind}/{rev}")
    def get_card(asset_id: str, kind: str, rev: int,
                 format: str = Query(default="json")):
        if format == "json":
            return engine.get_card(asset_id, kind, rev).to_dict()
        data = engine.render_card(asset_id, kind, rev, format=format)
        media = "text/markdown" if format == "markdown" else "application/json"
        return Response(content=data, media_type=media)

    # ------------------------------------------------------------------ gates

    @app.post("/assets/{asset_id}/gates/{gate}/open", status_code=201)
    def open_gate(asset_id: str, gate: str,
                  x_principal: Optional[str] = Header(default=None)):
        review = engine.open_gate_review(asset_id, gate, principal_of(x_principal))
        persist()
        return review.to_dict()

    @app.get("/assets/{asset_id}/gates/{gate}")
    def gate_status(asset_id: str, gate: str):
        return engine.gate_status(asset_id, gate)

    @app.post("/assets/{asset_id}/evidence", status_code=201)
    def attach_evidence(asset_id: str, payload: dict = Body(...),
                        x_principal: Optional[str] = Header(default=None)):
        if "payload_b64" in payload:
            blob = base64.b64decode(payload["payload_b64"])
        else:
            blob = str(_need(payload, "text")).encode("utf-8")
        evidence = engine.attach_evidence(asset_id, payload.get("description", ""), blob,
                                          principal_of(x_principal),
                                          external_ref=payload.get("external_ref", ""))
        persist()
        return evidence.to_dict()

    @app.post("/gates/{review_id}/checks")
    def record_check(review_id: str, payload: dict = Body(...),
                     x_principal: Optional[str] = Header(default=None)):
        item = engine.record_check(review_id, _need(payload, "item_id"),
                                   _need(payload, "result"),
                                   payload.get("evidence_refs", []),
                                   principal_of(x_principal))
        persist()
        return item.to_dict()

    @app.post("/gates/{review_id}/decision")
    def decide_gate(review_id: str, payload: dict = Body(...),
                    x_principal: Optional[str] = Header(default=None)):
        review = engine.decide_gate(review_id, principal_of(x_principal),
                                    _need(payload, "verdict"),
                                    payload.get("rationale", ""))
        persist()
        return review.to_dict()

    @app.get("/gates/{review_id}")
    def get_review(review_id: str):
        return engine.get_review(review_id).to_dict()

    # -------------------------------------------------------------- operation

    @app.post("/assets/{asset_id}/deployments", status_code=201)
    def register_deployment(asset_id: str, payload: dict = Body(...),
                            x_principal: Optional[str] = Header(default=None)):
        deployment = engine.register_deployment(
            asset_id, int(_need(payload, "model_card_revision")),
            int(_need(payload, "deployment_card_revision")), principal_of(x_principal))
        persist()
        return deployment.to_dict()

    @app.get("/assets/{asset_id}/deployments")
    def list_deployments(asset_id: str):
        out = []
        for d in engine.list_deployments(asset_id):
            doc = d.to_dict()
            doc["allowed_transitions"] = sorted(s.value for s in LEGAL_TRANSITIONS[d.state])
            out.append(doc)
        return out

    @app.post("/deployments/{deployment_id}/transition")
    def transition_deployment(deployment_id: str, payload: dict = Body(...),
                              x_principal: Optional[str] = Header(default=None)):
        deployment = engine.transition_deployment(
            deployment_id, _need(payload, "target"), principal_of(x_principal),
            approval_ref=payload.get("approval_ref"),
            canary_fraction=payload.get("canary_fraction"))
        persist()
        doc = deployment.to_dict()
        doc["allowed_transitions"] = sorted(
            s.value for s in LEGAL_TRANSITIONS[deployment.state])
        return doc

    @app.post("/metrics")
    def ingest_metrics(payload: dict = Body(...)):
        count = engine.ingest_metrics(_need(payload, "points"))
        persist()
        return {"accepted": count}

    @app.get("/assets/{asset_id}/alerts")
    def list_alerts(asset_id: str):
        return [a.to_dict() for a in engine.evaluate_rules(asset_id)]

    @app.post("/assets/{asset_id}/proposals", status_code=201)
    def open_proposal(asset_id: str, payload: dict = Body(...),
                      x_principal: Optional[str] = Header(default=None)):
        proposal = engine.open_update_proposal(asset_id, payload.get("trigger", "manual"),
                                               principal_of(x_principal))
        persist()
        return proposal.to_dict()

    # ------------------------------------------------------------------ audit

    @app.get("/assets/{asset_id}/audit")
    def audit_log(asset_id: str, format: str = Query(default="json")):
        if format == "canonical":
            return PlainTextResponse(engine.export_ledger(asset_id).decode("utf-8"))
        return [e.to_dict() for e in engine.audit_events(asset_id)]

    @app.get("/assets/{asset_id}/audit/verify")
    def audit_verify(asset_id: str):
        result = engine.verify_chain(asset_id)
        if result == "ok":
            return {"result": "Ok"}
        return {"result": "Broken", "first_bad_seq": result}

    @app.get("/assets/{asset_id}/revisions")
    def list_revisions(asset_id: str):
        return [r.to_dict() for r in engine.list_revisions(asset_id)]

    @app.get("/assets/{asset_id}/traceability")
    def traceability(asset_id: str):
        return engine.traceability_report(asset_id)

    # ------------------------------------------------------------------ board

    @app.get("/board")
    def board():
        return engine.board_feed()

    @app.get("/assets/{asset_id}/board")
    def asset_board(asset_id: str):
        feed = engine.board_feed()
        feed["assets"] = [t for t in feed["assets"] if t["asset_id"] == asset_id]
        if not feed["assets"]:
            engine.get_asset(asset_id)  # raises UnknownAsset
        feed["allowed_actions"] = engine.allowed_actions(asset_id)
        return feed

    @app.get("/meta")
    def meta():
        return {
            "stages": [{"stage": s.roman, "ordinal": int(s),
                        "name": engine.config.stage_names[s],
                        "phase": phase_of(s).value, "color": PHASE_COLORS[phase_of(s)],
                        "gate": None if s not in
                        {st for st in GATE_STAGE.values()} else
                        next(g.value for g, st in GATE_STAGE.items() if st == s)}
                       for s in Stage],
            "card_kinds": [{"kind": k.value, "designated_stage": DESIGNATED_STAGE[k].roman,
                            "sections": CARD_SECTIONS[k]} for k in CARD_SECTIONS],
            "gates": {g.value: {"stage": GATE_STAGE[g].roman,
                                "checklist": engine.default_checklist(g)} for g in GateId},
            "roles": engine.config.role_catalog,
            "deployment_edges": {s.value: sorted(t.value for t in targets)
                                 for s, targets in LEGAL_TRANSITIONS.items()},
        }

    return app


def serve(config: EngineConfig) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    from .persist import load_engine

    if config.storage:
        engine = load_engine(config.storage, config=config)
    else:
        engine = GovernanceEngine(config=config)
    app = create_app(engine, store_path=config.storage)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port)
