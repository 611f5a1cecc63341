"""Named nonlinearities g(u) = u + g2 u^2 + g3 u^3 + ...

All coefficients are exact ``Fraction`` values.  ``g1 = 1`` is implicit
everywhere and never stored.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

PRESETS = ("sine", "sinh", "phi4", "linear")
ODD_PRESETS = ("sine", "sinh", "linear")


def preset_coefficient(name: str, m: int) -> Fraction:
    """Coefficient g_m of the named preset (m >= 2)."""
    if m < 2:
        raise ValueError("m >= 2 expected")
    if name == "sine":
        return Fraction((-1) ** ((m - 1) // 2), factorial(m)) if m % 2 else Fraction(0)
    if name == "sinh":
        return Fraction(1, factorial(m)) if m % 2 else Fraction(0)
    if name == "phi4":
        # (-(1+u) + (1+u)^3)/2 = u + (3/2) u^2 + (1/2) u^3
        return {2: Fraction(3, 2), 3: Fraction(1, 2)}.get(m, Fraction(0))
    if name == "linear":
        return Fraction(0)
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def preset_coefficients(name: str, max_m: int) -> dict[int, Fraction]:
    """``{m: g_m}`` for ``2 <= m <= max_m``, zeros included."""
    return {m: preset_coefficient(name, m) for m in range(2, max_m + 1)}


def is_odd(coeffs: dict[int, Fraction]) -> bool:
    return all(not v for m, v in coeffs.items() if m % 2 == 0)
