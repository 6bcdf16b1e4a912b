"""Exception hierarchy shared by all taut modules."""


class TautError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TautError):
    """Structural data failed an exact invariant check."""


class NotIncreasing(ValidationError):
    pass


class SlopeMismatch(ValidationError):
    pass


class NotTauPower(ValidationError):
    pass


class NotInRing(ValidationError):
    pass


class DegreeNotOne(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class CertificateError(ValidationError):
    pass


class DomainMismatch(TautError):
    pass


class OutOfDomain(TautError):
    pass


class NonPositive(TautError):
    pass


class NotFtau(TautError):
    pass


class LeafCountMismatch(TautError):
    pass


class BadTuple(TautError):
    pass


class IdentityInput(TautError):
    pass


class NoRoomInTarget(TautError):
    pass


class BudgetError(TautError):
    """A configured work budget ran out before an answer was certified."""


class PowerBudgetExceeded(BudgetError):
    pass


class SearchBudgetExceeded(BudgetError):
    pass


class BudgetExceeded(BudgetError):
    pass


class ExprError(TautError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class ExprTypeError(ExprError):
    pass
