"""Domain errors shared across the workbench.

Every error carries a stable ``code`` string; the CLI maps any DomainError
to exit status 2 with a ``{"code", "message"}`` JSON body.
"""

from __future__ import annotations


class DomainError(Exception):
    code = "DomainError"

    def to_json(self) -> dict:
        return {"code": self.code, "message": str(self)}


class EmptyOpenError(DomainError):
    code = "EmptyOpen"


class SplitOutOfRange(DomainError):
    code = "SplitOutOfRange"


class IncompatibleSeq(DomainError):
    code = "IncompatibleSeq"


class TermNotTotal(DomainError):
    code = "TermNotTotal"


class AmbiguousAmalgamation(DomainError):
    code = "AmbiguousAmalgamation"


class BadCandidate(DomainError):
    code = "BadCandidate"


class PointNotInOpen(DomainError):
    code = "PointNotInOpen"


class OracleNotTotal(DomainError):
    code = "OracleNotTotal"


class NotAPoint(DomainError):
    code = "NotAPoint"


class NotASubopen(DomainError):
    code = "NotASubopen"


class InconsistentTermFamily(DomainError):
    code = "InconsistentTermFamily"


class ScheduleUnsound(DomainError):
    code = "ScheduleUnsound"


class BudgetExhausted(DomainError):
    code = "BudgetExhausted"


class BadCertificate(DomainError):
    code = "BadCertificate"


class TheoremViolated(DomainError):
    code = "TheoremViolated"


class NoStabilization(DomainError):
    code = "NoStabilization"
