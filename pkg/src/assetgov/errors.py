"""Domain error hierarchy with stable machine codes.

Every error raised by the engine maps to exactly one code; the HTTP layer
and the CLI reuse these codes verbatim so clients see identical behavior
through every surface.
"""

from __future__ import annotations

from typing import Any, Dict, Optional


class GovernanceError(Exception):
    """Base class for all domain errors."""

    code = "GovernanceError"
    http_status = 409

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details
        self.event_seq: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = self.details
        if self.event_seq is not None:
            out["event_seq"] = self.event_seq
        return out


class NotFoundError(GovernanceError):
    http_status = 404


class PermissionError_(GovernanceError):
    http_status = 403


class ValidationFailure(GovernanceError):
    http_status = 400


# --- lifecycle ---------------------------------------------------------------

class EmptyName(ValidationFailure):
    code = "EmptyName"


class UnknownPrincipal(NotFoundError):
    code = "UnknownPrincipal"


class DuplicateId(GovernanceError):
    code = "DuplicateId"


class UnknownAsset(NotFoundError):
    code = "UnknownAsset"


class GateNotApproved(GovernanceError):
    code = "GateNotApproved"


class MissingOrUnapprovedCard(GovernanceError):
    code = "MissingOrUnapprovedCard"


class NotResponsible(PermissionError_):
    code = "NotResponsible"


class NotAccountable(PermissionError_):
    code = "NotAccountable"


class TerminalStage(GovernanceError):
    code = "TerminalStage"


class AssetRetired(GovernanceError):
    code = "AssetRetired"


class NotEarlierStage(ValidationFailure):
    code = "NotEarlierStage"


class WrongStatus(GovernanceError):
    code = "WrongStatus"


class ManifestIncomplete(GovernanceError):
    code = "ManifestIncomplete"


# --- roles -------------------------------------------------------------------

class UnknownRole(NotFoundError):
    code = "UnknownRole"


class NotAuthorized(PermissionError_):
    code = "NotAuthorized"


# --- cards -------------------------------------------------------------------

class StageTooEarly(GovernanceError):
    code = "StageTooEarly"


class DuplicateCard(GovernanceError):
    code = "DuplicateCard"


class NotPermitted(PermissionError_):
    code = "NotPermitted"


class NoSuchCard(NotFoundError):
    code = "NoSuchCard"


class NoSuchRevision(NotFoundError):
    code = "NoSuchRevision"


class SoDViolation(PermissionError_):
    code = "SoDViolation"


class MissingSections(ValidationFailure):
    code = "MissingSections"


# --- gates -------------------------------------------------------------------

class WrongStage(GovernanceError):
    code = "WrongStage"


class ReviewAlreadyOpen(GovernanceError):
    code = "ReviewAlreadyOpen"


class ReviewNotOpen(GovernanceError):
    code = "ReviewNotOpen"


class UnknownReview(NotFoundError):
    code = "UnknownReview"


class UnknownItem(NotFoundError):
    code = "UnknownItem"


class MissingEvidence(ValidationFailure):
    code = "MissingEvidence"


class MandatoryItemNotPassed(GovernanceError):
    code = "MandatoryItemNotPassed"


class EmptyRationale(ValidationFailure):
    code = "EmptyRationale"


# --- operation ---------------------------------------------------------------

class UnknownDeployment(NotFoundError):
    code = "UnknownDeployment"


class InactiveDeployment(GovernanceError):
    code = "InactiveDeployment"


class NonMonotonicTimestamp(ValidationFailure):
    code = "NonMonotonicTimestamp"


class WrongPhase(GovernanceError):
    code = "WrongPhase"


class UnknownAlert(NotFoundError):
    code = "UnknownAlert"


class UnapprovedCardRevision(GovernanceError):
    code = "UnapprovedCardRevision"


class IllegalTransition(GovernanceError):
    code = "IllegalTransition"


class MissingApprovalRef(ValidationFailure):
    code = "MissingApprovalRef"


# --- audit / storage ---------------------------------------------------------

class DigestMismatch(GovernanceError):
    code = "DigestMismatch"
    http_status = 500


class StorageFailure(GovernanceError):
    code = "StorageFailure"
    http_status = 500


class IncompleteDecisions(GovernanceError):
    code = "IncompleteDecisions"


# --- config ------------------------------------------------------------------

class ParseError(ValidationFailure):
    code = "ParseError"


class ValidationError(ValidationFailure):
    code = "ValidationError"
