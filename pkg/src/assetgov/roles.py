"""Role catalog, responsibility matrix (RACI) and segregation-of-duties checks.

The four manufacturing-specific roles (hardware, infrastructure, service,
quality) are mandatory in every configuration; the remaining catalog is
editable. Segregation of duties is evaluated at the principal level so a
person holding bundled roles can never approve work they performed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set

from .lifecycle import Stage

PRODUCT_MANAGER = "ProductManager"
DOMAIN_EXPERT = "DomainExpert"
DATA_SCIENTIST = "DataScientist"
DATA_ENGINEER = "DataEngineer"
ML_ENGINEER = "MLEngineer"
SOFTWARE_ENGINEER = "SoftwareEngineer"
DEVOPS_ENGINEER = "DevOpsEngineer"
COMPLIANCE_OFFICER = "ComplianceOfficer"
HARDWARE_ENGINEER = "HardwareEngineer"
INFRASTRUCTURE_ENGINEER = "InfrastructureEngineer"
SERVICE_ENGINEER = "ServiceEngineer"
QUALITY_INSPECTOR = "QualityInspector"

DEFAULT_ROLE_CATALOG = [
    PRODUCT_MANAGER,
    DOMAIN_EXPERT,
    DATA_SCIENTIST,
    DATA_ENGINEER,
    ML_ENGINEER,
    SOFTWARE_ENGINEER,
    DEVOPS_ENGINEER,
    COMPLIANCE_OFFICER,
    HARDWARE_ENGINEER,
    INFRASTRUCTURE_ENGINEER,
    SERVICE_ENGINEER,
    QUALITY_INSPECTOR,
]

# These four can never be removed by configuration.
MANDATORY_ROLES = {
    HARDWARE_ENGINEER,
    INFRASTRUCTURE_ENGINEER,
    SERVICE_ENGINEER,
    QUALITY_INSPECTOR,
}

GATE_STAGES = {Stage.III, Stage.VII, Stage.X}


@dataclass
class Principal:
    principal_id: str
    display_name: str = ""
    active: bool = True


@dataclass
class RoleBinding:
    asset_id: str
    principal_id: str
    role: str

    def to_dict(self) -> dict:
        return {"asset_id": self.asset_id, "principal_id": self.principal_id, "role": self.role}


@dataclass
class StageAssignment:
    responsible: Set[str]
    accountable: str
    consulted: Set[str] = field(default_factory=set)
    informed: Set[str] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "responsible": sorted(self.responsible),
            "accountable": self.accountable,
            "consulted": sorted(self.consulted),
            "informed": sorted(self.informed),
        }


ResponsibilityMatrix = Dict[Stage, StageAssignment]


def default_matrix() -> ResponsibilityMatrix:
    """Shipped stage-by-role assignment; editable configuration, not a constant of the model."""
    m = {
        Stage.I: StageAssignment({PRODUCT_MANAGER, DOMAIN_EXPERT}, PRODUCT_MANAGER,
                                 {DATA_SCIENTIST}, {COMPLIANCE_OFFICER}),
        Stage.II: StageAssignment({DATA_SCIENTIST, DATA_ENGINEER, DOMAIN_EXPERT}, PRODUCT_MANAGER,
                                  {HARDWARE_ENGINEER}),
        Stage.III: StageAssignment({DATA_SCIENTIST, DOMAIN_EXPERT, QUALITY_INSPECTOR}, PRODUCT_MANAGER,
                                   {COMPLIANCE_OFFICER}),
        Stage.IV: StageAssignment({DATA_ENGINEER, HARDWARE_ENGINEER}, PRODUCT_MANAGER,
                                  {DATA_SCIENTIST}),
        Stage.V: StageAssignment({DATA_SCIENTIST, ML_ENGINEER}, PRODUCT_MANAGER,
                                 {DOMAIN_EXPERT}),
        Stage.VI: StageAssignment({SOFTWARE_ENGINEER, INFRASTRUCTURE_ENGINEER}, PRODUCT_MANAGER,
                                  {DEVOPS_ENGINEER, HARDWARE_ENGINEER}),
        Stage.VII: StageAssignment({QUALITY_INSPECTOR, ML_ENGINEER, SOFTWARE_ENGINEER}, COMPLIANCE_OFFICER,
                                   {PRODUCT_MANAGER}),
        Stage.VIII: StageAssignment({SERVICE_ENGINEER, DEVOPS_ENGINEER}, PRODUCT_MANAGER,
                                    {QUALITY_INSPECTOR}),
        Stage.IX: StageAssignment({DATA_SCIENTIST, ML_ENGINEER, SERVICE_ENGINEER}, PRODUCT_MANAGER),
        Stage.X: StageAssignment({QUALITY_INSPECTOR, SERVICE_ENGINEER}, COMPLIANCE_OFFICER,
                                 {PRODUCT_MANAGER}),
        Stage.XI: StageAssignment({DEVOPS_ENGINEER, SERVICE_ENGINEER, COMPLIANCE_OFFICER}, COMPLIANCE_OFFICER),
    }
    return m


def validate_matrix(matrix: ResponsibilityMatrix, catalog: Optional[Iterable[str]] = None) -> List[str]:
    """Return the list of violations; empty means the matrix is valid."""
    violations: List[str] = []
    roles = set(catalog) if catalog is not None else set(DEFAULT_ROLE_CATALOG)
    missing_mandatory = MANDATORY_ROLES - roles
    if missing_mandatory:
        violations.append(f"catalog: mandatory roles missing: {sorted(missing_mandatory)}")
    for stage in Stage:
        entry = matrix.get(stage)
        if entry is None:
            violations.append(f"{stage.roman}: no assignment")
            continue
        if not entry.accountable:
            violations.append(f"{stage.roman}: no accountable role")
        elif entry.accountable not in roles:
            violations.append(f"{stage.roman}: accountable role {entry.accountable!r} not in catalog")
        if not entry.responsible:
            violations.append(f"{stage.roman}: no responsible role")
        unknown = (entry.responsible | entry.consulted | entry.informed) - roles
        if unknown:
            violations.append(f"{stage.roman}: unknown roles {sorted(unknown)}")
    for stage in sorted(GATE_STAGES):
        entry = matrix.get(stage)
        if entry is not None and QUALITY_INSPECTOR not in entry.responsible:
            violations.append(f"{stage.roman}: QualityInspector must be responsible at gate stages")
    return violations


def check_sod(review_scope: Set[str], approver: str) -> Optional[str]:
    """None when approval is independent; otherwise a human-readable violation reason.

    Evaluated on principal ids, never on roles, so bundled roles cannot
    launder a self-approval.
    """
    if approver in review_scope:
        return f"approver {approver!r} is part of the reviewed scope"
    return None
