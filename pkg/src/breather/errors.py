"""Exception types raised across the package.

Every domain failure derives from :class:`BreatherError` so the CLI can map
it to exit code 1.
"""


class BreatherError(Exception):
    """Base class for domain errors."""


class LambdaNotPositive(BreatherError):
    """The soliton discriminant (5/6) g2^2 - (3/4) g3 is not positive."""

    def __init__(self, lam):
        self.lam = lam
        super().__init__(
            f"lambda = (5/6)*g2^2 - (3/4)*g3 = {lam} <= 0: no small-amplitude "
            "series in powers of eps exists for this g"
        )


class NotInRangeForm(BreatherError):
    """Right-hand side of L sigma = rhs is not of the form S^3 P(S^2)."""


class ConsistencyError(BreatherError):
    """An internal identity of the recursion failed (should never happen)."""


class PoleAtEvaluationPoint(BreatherError):
    """A denominator factor vanishes at the requested evaluation point."""

    def __init__(self, label, w0):
        self.label = label
        self.w0 = w0
        super().__init__(f"denominator factor {label} vanishes at w = {w0}")


class SpectralGapViolated(BreatherError):
    """omega_j^2 = (1 - eps^2) j^2 - 1 is not positive for some j >= 3."""


class NoContraction(BreatherError):
    """Fixed-point iteration stopped contracting."""


class DomainTooShort(BreatherError):
    """The tail of the improper integral beyond Xi is not negligible."""


class NoBreatherRegime(BreatherError):
    """The period does not exceed 2*pi."""
