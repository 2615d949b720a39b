"""Engine configuration: role catalog, responsibility matrix, checklists, drift rules.

Configuration is a single declarative YAML file (comments allowed). The
validated snapshot is stored as a versioned artifact at engine startup so
changes to governance rules are themselves auditable.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import yaml

from .errors import ParseError, ValidationError
from .gates import DEFAULT_CHECKLISTS, GateId
from .lifecycle import DEFAULT_STAGE_NAMES, Stage
from .operation import DriftRule, RollingZScore, StaticBounds
from .roles import (DEFAULT_ROLE_CATALOG, MANDATORY_ROLES, ResponsibilityMatrix,
                    StageAssignment, default_matrix, validate_matrix)

DEFAULT_DRIFT_WINDOW = 50
DEFAULT_DRIFT_K = 3.0


@dataclass
class EngineConfig:
    role_catalog: List[str] = field(default_factory=lambda: list(DEFAULT_ROLE_CATALOG))
    matrix: ResponsibilityMatrix = field(default_factory=default_matrix)
    checklists: Dict[GateId, List[dict]] = field(
        default_factory=lambda: {g: [dict(i) for i in items] for g, items in DEFAULT_CHECKLISTS.items()})
    stage_names: Dict[Stage, str] = field(default_factory=lambda: dict(DEFAULT_STAGE_NAMES))
    drift_rules: List[DriftRule] = field(default_factory=lambda: [
        DriftRule(rule_id="default-zscore", metric_name="model_quality",
                  kind=RollingZScore(window=DEFAULT_DRIFT_WINDOW, k=DEFAULT_DRIFT_K))])
    storage: Optional[str] = None
    listen_host: str = "127.0.0.1"
    listen_port: int = 8470

    def validate(self) -> List[str]:
        violations = validate_matrix(self.matrix, self.role_catalog)
        for gate in GateId:
            items = self.checklists.get(gate, [])
            if not any(i.get("mandatory", True) for i in items):
                violations.append(f"{gate.value}: checklist needs at least one mandatory item")
            seen = set()
            for i in items:
                if i["item_id"] in seen:
                    violations.append(f"{gate.value}: duplicate checklist item {i['item_id']!r}")
                seen.add(i["item_id"])
        rule_ids = set()
        for rule in self.drift_rules:
            if rule.rule_id in rule_ids:
                violations.append(f"drift rule {rule.rule_id!r} duplicated")
            rule_ids.add(rule.rule_id)
        return violations

    def to_dict(self) -> dict:
        return {
            "roles": list(self.role_catalog),
            "matrix": {s.roman: a.to_dict() for s, a in sorted(self.matrix.items())},
            "checklists": {g.value: [dict(i) for i in items] for g, items in self.checklists.items()},
            "stage_names": {s.roman: n for s, n in sorted(self.stage_names.items())},
            "drift_rules": [r.to_dict() for r in self.drift_rules],
            "storage": self.storage,
            "listen": {"host": self.listen_host, "port": self.listen_port},
        }


def _parse_rule(raw: dict) -> DriftRule:
    rtype = raw.get("type")
    if rtype == "static_bounds":
        kind = StaticBounds(min=float(raw["min"]), max=float(raw["max"]))
    elif rtype == "rolling_zscore":
        kind = RollingZScore(window=int(raw.get("window", DEFAULT_DRIFT_WINDOW)),
                             k=float(raw.get("k", DEFAULT_DRIFT_K)))
    else:
        raise ValueError(f"unknown drift rule type {rtype!r}")
    metric = raw.get("metric", raw.get("metric_name"))
    if not metric:
        raise ValueError("drift rule needs a metric")
    return DriftRule(rule_id=raw["rule_id"], metric_name=metric, kind=kind)


def config_from_dict(doc: dict) -> EngineConfig:
    cfg = EngineConfig()
    roles = doc.get("roles", {}) or {}
    catalog = list(DEFAULT_ROLE_CATALOG)
    for role in roles.get("remove", []) or []:
        if role in MANDATORY_ROLES:
            raise ValidationError(f"role {role!r} is mandatory and cannot be removed",
                                  violations=[f"roles: {role} mandatory"])
        if role in catalog:
            catalog.remove(role)
    for role in roles.get("extra", []) or []:
        if role not in catalog:
            catalog.append(role)
    cfg.role_catalog = catalog

    if "matrix" in doc and doc["matrix"]:
        matrix: ResponsibilityMatrix = {}
        for key, entry in doc["matrix"].items():
            stage = Stage.from_any(key)
            matrix[stage] = StageAssignment(
                responsible=set(entry.get("responsible", [])),
                accountable=entry.get("accountable", ""),
                consulted=set(entry.get("consulted", [])),
                informed=set(entry.get("informed", [])),
            )
        cfg.matrix = matrix

    if "checklists" in doc and doc["checklists"]:
        checklists: Dict[GateId, List[dict]] = {g: [dict(i) for i in items]
                                                for g, items in DEFAULT_CHECKLISTS.items()}
        for key, items in doc["checklists"].items():
            gate = GateId.from_any(key)
            checklists[gate] = [
                {"item_id": i["item_id"], "description": i.get("description", i["item_id"]),
                 "mandatory": bool(i.get("mandatory", True))}
                for i in items
            ]
        cfg.checklists = checklists

    if "stage_names" in doc and doc["stage_names"]:
        names = dict(DEFAULT_STAGE_NAMES)
        for key, name in doc["stage_names"].items():
            names[Stage.from_any(key)] = str(name)
        cfg.stage_names = names

    try:
        cfg.drift_rules = [_parse_rule(r) for r in doc.get("drift_rules", []) or []]
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"bad drift rule: {exc}", violations=[str(exc)])

    cfg.storage = doc.get("storage")
    listen = doc.get("listen", {}) or {}
    cfg.listen_host = listen.get("host", cfg.listen_host)
    cfg.listen_port = int(listen.get("port", cfg.listen_port))

    violations = cfg.validate()
    if violations:
        raise ValidationError("configuration invalid", violations=violations)
    return cfg


def load_config(path: Optional[str] = None) -> EngineConfig:
    """Parse and validate a config file; with no path, load the shipped default."""
    if path is None:
        text = importlib.resources.files("assetgov").joinpath("data/default_config.yaml").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark else 0
        raise ParseError(f"config parse error at line {line}: {exc}", line=line)
    if not isinstance(doc, dict):
        raise ParseError("config root must be a mapping", line=1)
    return config_from_dict(doc)
