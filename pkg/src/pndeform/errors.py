"""Exception hierarchy shared by all pndeform modules."""


class PndefError(Exception):
    """Base class for all domain errors raised by this package."""


class NotAUnit(PndefError):
    """Element reduces to 0 mod p, so it has no inverse."""


class NotASquare(PndefError):
    """Residue of the element is a quadratic non-residue."""


class PrecisionOutOfRange(PndefError):
    """Requested precision outside [1, n]."""


class IndexOutOfRange(PndefError):
    """Polynomial or recursion index below its defined range."""


class DeterminantNotOne(PndefError):
    """Trace-polynomial power formula needs determinant 1."""


class InvalidRepresentation(PndefError):
    """A supplied matrix image is not invertible or otherwise malformed."""


class CapExceeded(PndefError):
    """An enumeration would exceed the configured capacity."""


class NotFound(PndefError):
    """Exhaustive search over a finite image found no matching element."""


class InvalidAction(PndefError):
    """Supplied module actions violate the defining group relation."""


class HypothesisViolated(PndefError):
    """Input violates a stated precondition of the local classification."""


class InvalidResidual(PndefError):
    """Residual generator pair violates the tame relation or determinants."""


class MismatchFound(PndefError):
    """Lift enumeration and versal presentation disagree; carries witnesses."""

    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class DistinguishednessViolated(PndefError):
    """The two diagonal characters at p are congruent mod p."""


class NegativeDim(PndefError):
    """A ledger row carries a negative dimension."""


class DeltaNonZero(PndefError):
    """The assembled ledger does not balance to zero."""

    def __init__(self, message, rows=None):
        super().__init__(message)
        self.rows = rows or []


class SchemaError(PndefError):
    """Scenario or report file does not match the documented schema."""
