"""Breather-type solutions of nonlinear Klein-Gordon equations.

Exact series constructions (small-amplitude and exponential), pole
conditions, a majorant check, and a numerical solver for decaying
solutions on a finite Fourier truncation.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BreatherError,
    ConsistencyError,
    DomainTooShort,
    LambdaNotPositive,
    NoBreatherRegime,
    NoContraction,
    NotInRangeForm,
    PoleAtEvaluationPoint,
    SpectralGapViolated,
)

__all__ = [
    "__version__",
    "BreatherError",
    "ConsistencyError",
    "DomainTooShort",
    "LambdaNotPositive",
    "NoBreatherRegime",
    "NoContraction",
    "NotInRangeForm",
    "PoleAtEvaluationPoint",
    "SpectralGapViolated",
]
