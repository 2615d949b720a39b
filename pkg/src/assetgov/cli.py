"""Command-line client.

Two modes: embedded (state in a local JSON store, default) or client
(`--server URL` talks to a running service). Output is a human-readable
listing by default; `--format canonical` prints canonical JSON. Exit
codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Any, Dict, List, Optional

import click

from . import canonical
from .config import EngineConfig, load_config
from .engine import GovernanceEngine
from .errors import GovernanceError, ValidationError
from .operation import MetricPoint
from .persist import load_engine, save_engine

DEFAULT_STORE = "assetgov-store.json"


class Backend:
    """Dispatches operations either to a local engine or to the HTTP API."""

    def __init__(self, server: Optional[str], store: str, config: EngineConfig,
                 principal: Optional[str]) -> None:
        self.server = server
        self.store = store
        self.config = config
        self.principal = principal
        self._engine: Optional[GovernanceEngine] = None

    # -- embedded ------------------------------------------------------------

    @property
    def engine(self) -> GovernanceEngine:
        if self._engine is None:
            self._engine = load_engine(self.store, config=self.config)
        return self._engine

    def _save(self) -> None:
        save_engine(self.engine, self.store)

    # -- http ----------------------------------------------------------------

    def _http(self, method: str, path: str, body: Optional[dict] = None,
              params: Optional[dict] = None) -> Any:
        import httpx

        headers = {}
        if self.principal:
            headers["X-Principal"] = self.principal
        response = httpx.request(method, self.server.rstrip("/") + path, json=body,
                                 params=params, headers=headers, timeout=30.0)
        if response.status_code >= 400:
            try:
                doc = response.json()
            except ValueError:
                doc = {"code": "HttpError", "message": response.text}
            err = GovernanceError(doc.get("message", "request failed"))
            err.code = doc.get("code", "HttpError")
            err.details = doc.get("details", {})
            raise err
        if response.headers.get("content-type", "").startswith("application/json"):
            return response.json()
        return response.text

    def _actor(self) -> str:
        if not self.principal:
            raise ValidationError("a principal is required; pass --as <principal-id>")
        return self.principal

    # -- operations ----------------------------------------------------------

    def principal_add(self, principal_id: str, display_name: str) -> Any:
        if self.server:
            return self._http("POST", "/principals",
                              {"principal_id": principal_id, "display_name": display_name})
        p = self.engine.register_principal(principal_id, display_name)
        self._save()
        return {"principal_id": p.principal_id, "display_name": p.display_name}

    def asset_create(self, name: str, description: str, asset_id: Optional[str]) -> Any:
        if self.server:
            return self._http("POST", "/assets", {"name": name, "description": description,
                                                  "asset_id": asset_id})
        from .api import asset_to_dict
        asset = self.engine.create_asset(name, description, self._actor(), asset_id=asset_id)
        self._save()
        return asset_to_dict(self.engine, asset)

    def asset_list(self) -> Any:
        if self.server:
            return self._http("GET", "/assets")
        from .api import asset_to_dict
        return [asset_to_dict(self.engine, a) for a in self.engine.list_assets()]

    def asset_show(self, asset_id: str) -> Any:
        if self.server:
            return self._http("GET", f"/assets/{asset_id}")
        from .api import asset_to_dict
        out = asset_to_dict(self.engine, self.engine.get_asset(asset_id))
        out["allowed_actions"] = self.engine.allowed_actions(asset_id)
        return out

    def asset_advance(self, asset_id: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/advance")
        record = self.engine.advance(asset_id, self._actor())
        self._save()
        return record.to_dict()

    def asset_feedback(self, asset_id: str, target: str, reason: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/feedback",
                              {"target": target, "reason": reason})
        record = self.engine.feedback(asset_id, target, self._actor(), reason)
        self._save()
        return record.to_dict()

    def asset_retire(self, asset_id: str, reason: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/retire", {"reason": reason})
        record = self.engine.initiate_retirement(asset_id, self._actor(), reason)
        self._save()
        return record.to_dict()

    def asset_retire_complete(self, asset_id: str, manifest_id: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/retire/complete",
                              {"manifest_id": manifest_id})
        from .api import asset_to_dict
        asset = self.engine.complete_retirement(asset_id, manifest_id, actor=self._actor())
        self._save()
        return asset_to_dict(self.engine, asset)

    def manifest_build(self, asset_id: str, decisions: List[dict], allow_partial: bool) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/retirement-manifest",
                              {"decisions": decisions, "allow_partial": allow_partial})
        manifest = self.engine.build_retirement_manifest(
            asset_id, decisions, actor=self._actor(), allow_partial=allow_partial)
        self._save()
        return manifest.to_dict()

    def revisions_list(self, asset_id: str) -> Any:
        if self.server:
            return self._http("GET", f"/assets/{asset_id}/revisions")
        return [r.to_dict() for r in self.engine.list_revisions(asset_id)]

    def role_bind(self, asset_id: str, principal_id: str, role: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/roles",
                              {"principal_id": principal_id, "role": role})
        binding = self.engine.bind_role(asset_id, principal_id, role, self._actor())
        self._save()
        return binding.to_dict()

    def card_create(self, asset_id: str, kind: str, fields: Dict[str, str]) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/cards",
                              {"kind": kind, "fields": fields})
        card = self.engine.create_card(asset_id, kind, self._actor(), fields)
        self._save()
        return card.to_dict()

    def card_revise(self, asset_id: str, kind: str, fields: Dict[str, str]) -> Any:
        if self.server:
            return self._http("PUT", f"/assets/{asset_id}/cards/{kind}", {"fields": fields})
        card = self.engine.revise_card(asset_id, kind, self._actor(), fields)
        self._save()
        return card.to_dict()

    def card_approve(self, asset_id: str, kind: str, rationale: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/cards/{kind}/approve",
                              {"rationale": rationale})
        card = self.engine.approve_card(asset_id, kind, self._actor(), rationale)
        self._save()
        return card.to_dict()

    def card_show(self, asset_id: str, kind: str, revision: Optional[int],
                  render: Optional[str]) -> Any:
        if self.server:
            if revision is None:
                return self._http("GET", f"/assets/{asset_id}/cards/{kind}")
            return self._http("GET", f"/assets/{asset_id}/cards/{kind}/{revision}",
                              params={"format": render or "json"})
        card = self.engine.get_card(asset_id, kind, revision)
        if render:
            return self.engine.render_card(asset_id, kind, card.revision,
                                           format=render).decode("utf-8")
        return card.to_dict()

    def gate_open(self, asset_id: str, gate: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/gates/{gate}/open")
        review = self.engine.open_gate_review(asset_id, gate, self._actor())
        self._save()
        return review.to_dict()

    def gate_check(self, review_id: str, item_id: str, result: str,
                   evidence_refs: List[str]) -> Any:
        if self.server:
            return self._http("POST", f"/gates/{review_id}/checks",
                              {"item_id": item_id, "result": result,
                               "evidence_refs": evidence_refs})
        item = self.engine.record_check(review_id, item_id, result, evidence_refs,
                                        self._actor())
        self._save()
        return item.to_dict()

    def gate_decide(self, review_id: str, verdict: str, rationale: str) -> Any:
        if self.server:
            return self._http("POST", f"/gates/{review_id}/decision",
                              {"verdict": verdict, "rationale": rationale})
        review = self.engine.decide_gate(review_id, self._actor(), verdict, rationale)
        self._save()
        return review.to_dict()

    def gate_status(self, asset_id: str, gate: str) -> Any:
        if self.server:
            return self._http("GET", f"/assets/{asset_id}/gates/{gate}")
        return self.engine.gate_status(asset_id, gate)

    def evidence_attach(self, asset_id: str, description: str, text: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/evidence",
                              {"description": description, "text": text})
        evidence = self.engine.attach_evidence(asset_id, description,
                                               text.encode("utf-8"), self._actor())
        self._save()
        return evidence.to_dict()

    def deploy_register(self, asset_id: str, model_rev: int, deploy_rev: int) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/deployments",
                              {"model_card_revision": model_rev,
                               "deployment_card_revision": deploy_rev})
        d = self.engine.register_deployment(asset_id, model_rev, deploy_rev, self._actor())
        self._save()
        return d.to_dict()

    def deploy_transition(self, deployment_id: str, target: str,
                          approval_ref: Optional[str],
                          canary_fraction: Optional[float]) -> Any:
        if self.server:
            return self._http("POST", f"/deployments/{deployment_id}/transition",
                              {"target": target, "approval_ref": approval_ref,
                               "canary_fraction": canary_fraction})
        d = self.engine.transition_deployment(deployment_id, target, self._actor(),
                                              approval_ref=approval_ref,
                                              canary_fraction=canary_fraction)
        self._save()
        return d.to_dict()

    def metrics_ingest(self, points: List[dict]) -> Any:
        if self.server:
            return self._http("POST", "/metrics", {"points": points})
        count = self.engine.ingest_metrics(points)
        self._save()
        return {"accepted": count}

    def proposal_open(self, asset_id: str, trigger: str) -> Any:
        if self.server:
            return self._http("POST", f"/assets/{asset_id}/proposals", {"trigger": trigger})
        proposal = self.engine.open_update_proposal(asset_id, trigger, self._actor())
        self._save()
        return proposal.to_dict()

    def alerts_list(self, asset_id: str) -> Any:
        if self.server:
            return self._http("GET", f"/assets/{asset_id}/alerts")
        return [a.to_dict() for a in self.engine.evaluate_rules(asset_id)]

    def audit_show(self, asset_id: str) -> Any:
        if self.server:
            return self._http("GET", f"/assets/{asset_id}/audit")
        return [e.to_dict() for e in self.engine.audit_events(asset_id)]

    def audit_verify(self, asset_id: str) -> Any:
        if self.server:
            return self._http("GET", f"/assets/{asset_id}/audit/verify")
        result = self.engine.verify_chain(asset_id)
        return {"result": "Ok"} if result == "ok" else \
            {"result": "Broken", "first_bad_seq": result}

    def trace_report(self, asset_id: str) -> Any:
        if self.server:
            return self._http("GET", f"/assets/{asset_id}/traceability")
        return self.engine.traceability_report(asset_id)


# ---------------------------------------------------------------------- output

def emit(result: Any, fmt: str) -> None:
    if fmt == "canonical":
        sys.stdout.write(canonical.canonical_bytes(result).decode("utf-8"))
        return
    if isinstance(result, str):
        click.echo(result)
    elif isinstance(result, list):
        for row in result:
            if isinstance(row, dict):
                click.echo("  ".join(f"{k}={_short(v)}" for k, v in row.items()))
            else:
                click.echo(str(row))
    elif isinstance(result, dict):
        for key, value in result.items():
            click.echo(f"{key}: {_short(value)}")
    else:
        click.echo(str(result))


def _short(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _parse_fields(pairs: List[str], fields_json: Optional[str]) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    if fields_json:
        fields.update(json.loads(fields_json))
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"field must be key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        fields[key] = value
    return fields


# ------------------------------------------------------------------- commands

@click.group()
@click.option("--server", envvar="ASSETGOV_SERVER", default=None,
              help="Base URL of a running service; omit for embedded mode.")
@click.option("--store", envvar="ASSETGOV_STORE", default=DEFAULT_STORE,
              help="Path of the local JSON store (embedded mode).")
@click.option("--config", "config_path", envvar="ASSETGOV_CONFIG", default=None,
              help="Engine configuration file (YAML).")
@click.option("--as", "-u", "principal", envvar="ASSETGOV_PRINCIPAL", default=None,
              help="Acting principal id.")
@click.option("--format", "fmt", type=click.Choice(["human", "canonical"]),
              default="human")
@click.pass_context
def main(ctx, server, store, config_path, principal, fmt):
    """Governance engine for AI assets in manufacturing."""
    ctx.obj = Backend(server, store, load_config(config_path), principal)
    ctx.obj.fmt = fmt


def _run(ctx, fn, *args, **kwargs):
    try:
        emit(fn(*args, **kwargs), ctx.obj.fmt)
    except GovernanceError as exc:
        click.echo(f"error: {exc.code}: {exc.message}", err=True)
        if exc.details:
            click.echo(f"details: {json.dumps(exc.details, sort_keys=True)}", err=True)
        sys.exit(1)


@main.group()
def principal():
    """Manage principals."""


@principal.command("add")
@click.argument("principal_id")
@click.option("--name", default="")
@click.pass_context
def principal_add(ctx, principal_id, name):
    _run(ctx, ctx.obj.principal_add, principal_id, name)


@main.group()
def asset():
    """Create and steer assets through the lifecycle."""


@asset.command("create")
@click.argument("name")
@click.option("--description", default="")
@click.option("--id", "asset_id", default=None)
@click.pass_context
def asset_create(ctx, name, description, asset_id):
    _run(ctx, ctx.obj.asset_create, name, description, asset_id)


@asset.command("list")
@click.pass_context
def asset_list(ctx):
    _run(ctx, ctx.obj.asset_list)


@asset.command("show")
@click.argument("asset_id")
@click.pass_context
def asset_show(ctx, asset_id):
    _run(ctx, ctx.obj.asset_show, asset_id)


@asset.command("advance")
@click.argument("asset_id")
@click.pass_context
def asset_advance(ctx, asset_id):
    _run(ctx, ctx.obj.asset_advance, asset_id)


@asset.command("feedback")
@click.argument("asset_id")
@click.option("--target", required=True, help="Earlier stage (Roman or ordinal).")
@click.option("--reason", required=True)
@click.pass_context
def asset_feedback(ctx, asset_id, target, reason):
    _run(ctx, ctx.obj.asset_feedback, asset_id, target, reason)


@asset.command("retire")
@click.argument("asset_id")
@click.option("--reason", default="")
@click.pass_context
def asset_retire(ctx, asset_id, reason):
    _run(ctx, ctx.obj.asset_retire, asset_id, reason)


@asset.command("complete-retirement")
@click.argument("asset_id")
@click.option("--manifest", "manifest_id", required=True)
@click.pass_context
def asset_retire_complete(ctx, asset_id, manifest_id):
    _run(ctx, ctx.obj.asset_retire_complete, asset_id, manifest_id)


@asset.command("manifest")
@click.argument("asset_id")
@click.option("--decisions", "decisions_file", required=True,
              help="JSON file with retention decisions.")
@click.option("--allow-partial", is_flag=True, default=False)
@click.pass_context
def asset_manifest(ctx, asset_id, decisions_file, allow_partial):
    with open(decisions_file, "r", encoding="utf-8") as fh:
        decisions = json.load(fh)
    _run(ctx, ctx.obj.manifest_build, asset_id, decisions, allow_partial)


@asset.command("revisions")
@click.argument("asset_id")
@click.pass_context
def asset_revisions(ctx, asset_id):
    _run(ctx, ctx.obj.revisions_list, asset_id)


@main.group()
def role():
    """Role bindings."""


@role.command("bind")
@click.option("--asset", "asset_id", required=True)
@click.option("--principal", "principal_id", required=True)
@click.option("--role", "role_name", required=True)
@click.pass_context
def role_bind(ctx, asset_id, principal_id, role_name):
    _run(ctx, ctx.obj.role_bind, asset_id, principal_id, role_name)


@main.group()
def card():
    """Documentation cards."""


@card.command("create")
@click.option("--asset", "asset_id", required=True)
@click.option("--kind", required=True)
@click.option("--field", "pairs", multiple=True, help="Section as key=value; repeatable.")
@click.option("--fields-json", default=None)
@click.pass_context
def card_create(ctx, asset_id, kind, pairs, fields_json):
    _run(ctx, ctx.obj.card_create, asset_id, kind, _parse_fields(list(pairs), fields_json))


@card.command("revise")
@click.option("--asset", "asset_id", required=True)
@click.option("--kind", required=True)
@click.option("--field", "pairs", multiple=True)
@click.option("--fields-json", default=None)
@click.pass_context
def card_revise(ctx, asset_id, kind, pairs, fields_json):
    _run(ctx, ctx.obj.card_revise, asset_id, kind, _parse_fields(list(pairs), fields_json))


@card.command("approve")
@click.option("--asset", "asset_id", required=True)
@click.option("--kind", required=True)
@click.option("--rationale", required=True)
@click.pass_context
def card_approve(ctx, asset_id, kind, rationale):
    _run(ctx, ctx.obj.card_approve, asset_id, kind, rationale)


@card.command("show")
@click.option("--asset", "asset_id", required=True)
@click.option("--kind", required=True)
@click.option("--revision", type=int, default=None)
@click.option("--render", type=click.Choice(["canonical", "markdown"]), default=None)
@click.pass_context
def card_show(ctx, asset_id, kind, revision, render):
    _run(ctx, ctx.obj.card_show, asset_id, kind, revision, render)


@main.group()
def gate():
    """Quality gate reviews."""


@gate.command("open")
@click.option("--asset", "asset_id", required=True)
@click.option("--gate", "gate_id", required=True)
@click.pass_context
def gate_open(ctx, asset_id, gate_id):
    _run(ctx, ctx.obj.gate_open, asset_id, gate_id)


@gate.command("check")
@click.option("--review", "review_id", required=True)
@click.option("--item", "item_id", required=True)
@click.option("--result", type=click.Choice(["pass", "fail"], case_sensitive=False),
              required=True)
@click.option("--evidence", "evidence_refs", multiple=True)
@click.pass_context
def gate_check(ctx, review_id, item_id, result, evidence_refs):
    _run(ctx, ctx.obj.gate_check, review_id, item_id, result, list(evidence_refs))


@gate.command("decide")
@click.option("--review", "review_id", required=True)
@click.option("--verdict", type=click.Choice(["approve", "reject"], case_sensitive=False),
              required=True)
@click.option("--rationale", required=True)
@click.pass_context
def gate_decide(ctx, review_id, verdict, rationale):
    _run(ctx, ctx.obj.gate_decide, review_id, verdict, rationale)


@gate.command("status")
@click.option("--asset", "asset_id", required=True)
@click.option("--gate", "gate_id", required=True)
@click.pass_context
def gate_status(ctx, asset_id, gate_id):
    _run(ctx, ctx.obj.gate_status, asset_id, gate_id)


@main.group()
def evidence():
    """Gate review evidence."""


@evidence.command("attach")
@click.option("--asset", "asset_id", required=True)
@click.option("--description", default="")
@click.option("--text", required=True, help="Evidence payload as text.")
@click.pass_context
def evidence_attach(ctx, asset_id, description, text):
    _run(ctx, ctx.obj.evidence_attach, asset_id, description, text)


@main.group()
def deploy():
    """Deployment rollout control."""


@deploy.command("register")
@click.option("--asset", "asset_id", required=True)
@click.option("--model-rev", type=int, required=True)
@click.option("--deploy-rev", type=int, required=True)
@click.pass_context
def deploy_register(ctx, asset_id, model_rev, deploy_rev):
    _run(ctx, ctx.obj.deploy_register, asset_id, model_rev, deploy_rev)


@deploy.command("transition")
@click.option("--deployment", "deployment_id", required=True)
@click.option("--target", required=True)
@click.option("--approval-ref", default=None)
@click.option("--canary-fraction", type=float, default=None)
@click.pass_context
def deploy_transition(ctx, deployment_id, target, approval_ref, canary_fraction):
    _run(ctx, ctx.obj.deploy_transition, deployment_id, target, approval_ref,
         canary_fraction)


@main.group()
def metrics():
    """Metric ingestion."""


@metrics.command("ingest")
@click.argument("path")
@click.pass_context
def metrics_ingest(ctx, path):
    """Ingest a line-oriented file: deployment_id,metric_name,value,ISO-timestamp."""
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 4:
                raise click.UsageError(f"{path}:{lineno}: expected 4 comma-separated fields")
            points.append({"deployment_id": parts[0], "metric_name": parts[1],
                           "value": float(parts[2]), "timestamp": parts[3],
                           "asset_id": ""})
    _run(ctx, ctx.obj.metrics_ingest, points)


@main.group()
def alert():
    """Drift alerts and update proposals."""


@alert.command("list")
@click.option("--asset", "asset_id", required=True)
@click.pass_context
def alert_list(ctx, asset_id):
    _run(ctx, ctx.obj.alerts_list, asset_id)


@alert.command("propose-update")
@click.option("--asset", "asset_id", required=True)
@click.option("--trigger", default="manual", help="Alert id or 'manual'.")
@click.pass_context
def alert_propose(ctx, asset_id, trigger):
    _run(ctx, ctx.obj.proposal_open, asset_id, trigger)


@main.group()
def audit():
    """Audit ledger."""


@audit.command("show")
@click.option("--asset", "asset_id", required=True)
@click.pass_context
def audit_show(ctx, asset_id):
    _run(ctx, ctx.obj.audit_show, asset_id)


@audit.command("verify")
@click.option("--asset", "asset_id", required=True)
@click.pass_context
def audit_verify(ctx, asset_id):
    _run(ctx, ctx.obj.audit_verify, asset_id)


@main.group()
def trace():
    """Traceability reporting."""


@trace.command("report")
@click.option("--asset", "asset_id", required=True)
@click.pass_context
def trace_report(ctx, asset_id):
    _run(ctx, ctx.obj.trace_report, asset_id)


@main.command("serve")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.pass_context
def serve_cmd(ctx, host, port):
    """Run the HTTP service."""
    from .api import serve

    config = ctx.obj.config
    config.listen_host = host or os.environ.get("ASSETGOV_HOST", config.listen_host)
    config.listen_port = port or int(os.environ.get("ASSETGOV_PORT", config.listen_port))
    config.storage = os.environ.get("ASSETGOV_STORAGE", config.storage)
    serve(config)


if __name__ == "__main__":
    main()
