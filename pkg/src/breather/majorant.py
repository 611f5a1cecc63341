"""Term-by-term domination of odd series by the sinh-Gordon one.

The sinh-Gordon solution ``4 artanh(r cos(tau)/sinh(xi))`` with
``r = eps/sqrt(1 - eps^2)``, translated by ``a = log(sqrt(1 - eps^2)/8)`` so
that its ``exp(-xi)`` coefficient is ``eps cos(tau)``, has coefficients

    abar_ls(eps) = b_ls(r) * (sqrt(1 - eps^2)/8)^(2l+1)

on ``exp(-(2l+1) xi) cos((2s+1) tau)``.  Every one is non-negative and they
bound the corresponding coefficients of any odd ``g`` with ``|g_m| <= 1/m!``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exp_series import EPS, GSpec, expand_exp

__all__ = [
    "ShgCoefficient",
    "DominationEntry",
    "DominationReport",
    "shg_b",
    "shg_abar",
    "dominate",
    "convergence_xi_min",
    "h_gap_check",
]


@dataclass(frozen=True)
class ShgCoefficient:
    """``b_ls(r) = sum_n c_n r^n`` (odd ``n`` from ``2s+1`` to ``2l+1``)."""

    l: int
    s: int
    value_poly: dict  # power of r -> Fraction

    def __call__(self, r):
        return sum(c * r**n for n, c in self.value_poly.items())

    def text(self) -> str:
        parts = []
        for n, c in sorted(self.value_poly.items()):
            mono = "r" if n == 1 else f"r^{n}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts) or "0"


def _cell(l: int, s: int, n: int) -> Fraction:
    return Fraction(8 * comb(2 * n + 1, n - s) * comb(n + l, l - n), 2 * n + 1)


def shg_b(l: int, s: int) -> ShgCoefficient:
    """Coefficient of ``exp(-(2l+1)(xi - a)) cos((2s+1) tau)`` in the series.

    Expanding ``(1/sinh)^(2n+1)`` in ``exp(-2 xi)`` and ``cos^(2n+1)`` in
    harmonics gives ``8 r^(2n+1) C(2n+1, n-s) C(n+l, l-n)/(2n+1)``.
    """
    if s < 0 or l < 0:
        raise ValueError("indices must be >= 0")
    if s > l:
        raise ValueError(f"s = {s} > l = {l}")
    return ShgCoefficient(l, s, {2 * n + 1: _cell(l, s, n) for n in range(s, l + 1)})


def _check_eps(eps) -> Fraction:
    if isinstance(eps, float):
        raise TypeError("eps must be an exact rational")
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps = {eps} outside (0, 1)")
    return eps


def shg_abar(l: int, s: int, eps) -> Fraction:
    """``b_ls(r) (sqrt(1-eps^2)/8)^(2l+1)``, exact: each term is
    ``c_n eps^(2n+1) (1-eps^2)^(l-n) / 8^(2l+1)``."""
    eps = _check_eps(eps)
    b = shg_b(l, s)
    one_w = 1 - eps * eps
    tot = Fraction(0)
    for p, c in b.value_poly.items():
        n = (p - 1) // 2
        tot += c * eps**p * one_w ** (l - n)
    return tot / 8 ** (2 * l + 1)


@dataclass(frozen=True)
class DominationEntry:
    l: int
    s: int
    a: Fraction  # signed a_ls
    abar: Fraction

    @property
    def ratio(self) -> Fraction | None:
        return abs(self.a) / self.abar if self.abar else None


@dataclass(frozen=True)
class DominationReport:
    eps: Fraction
    L: int
    entries: tuple[DominationEntry, ...]
    verdict: bool

    @property
    def equal_everywhere(self) -> bool:
        return all(abs(e.a) == e.abar for e in self.entries)

    @property
    def strict_somewhere(self) -> bool:
        return any(abs(e.a) < e.abar for e in self.entries)

    def table(self) -> str:
        lines = ["l s |a_ls| abar_ls ratio"]
        for e in self.entries:
            r = "-" if e.ratio is None else f"{float(e.ratio):.17g}"
            lines.append(f"{e.l} {e.s} {abs(e.a)} {e.abar} {r}")
        return "\n".join(lines) + "\n"


def _admissible(g: GSpec) -> None:
    if not g.is_numeric():
        raise ValueError("dominate needs numeric coefficients")
    if not g.is_odd():
        raise ValueError("dominate needs an odd g")
    for m, v in g.numeric.items():
        if abs(v) > Fraction(1, factorial(m)):
            raise ValueError(f"|g{m}| = {abs(v)} exceeds 1/{m}!")


def dominate(g: GSpec, eps, L: int) -> DominationReport:
    """Compare ``|a_ls(eps)|`` against ``abar_ls(eps)`` for ``0 <= s <= l <= L``.

    ``a_ls`` is the exact coefficient of ``exp(-(2l+1) xi) cos((2s+1) tau)``
    in the series with ``u_1 = eps cos(tau)``.
    """
    eps = _check_eps(eps)
    _admissible(g)
    ser = expand_exp(g, 2 * L + 1, normalization=EPS)
    entries = []
    ok = True
    for l in range(L + 1):
        for s in range(l + 1):
            a = ser.value(2 * l + 1, 2 * s + 1, eps)
            ab = shg_abar(l, s, eps)
            ok = ok and abs(a) <= ab
            entries.append(DominationEntry(l, s, a, ab))
    return DominationReport(eps, L, tuple(entries), ok)


def convergence_xi_min(eps: float) -> float:
    """Smallest ``xi`` beyond which ``|r / sinh(xi - a)| < 1``.

    ``sinh`` is increasing, so this is ``a + asinh(r)``.
    """
    eps = float(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps = {eps} outside (0, 1)")
    r = eps / math.sqrt(1 - eps * eps)
    a = math.log(math.sqrt(1 - eps * eps) / 8)
    return a + math.asinh(r)


def h_gap_check(L: int, eps) -> bool:
    """``h(2l+1, 2s+1) <= -8 eps^2`` for all ``0 <= s <= l``, ``1 <= l <= L``.

    (``l = 0`` is the linear mode, where ``h(1, 1) = 0``.)
    """
    eps = Fraction(eps)
    if eps == 0:
        warnings.warn("eps = 0: the bound -8 eps^2 = 0 is degenerate", stacklevel=2)
    elif not 0 < eps < 1:
        raise ValueError(f"eps = {eps} outside (0, 1)")
    w = eps * eps
    worst = None
    for l in range(1, L + 1):
        for s in range(l + 1):
            a, b = 2 * l + 1, 2 * s + 1
            h = (1 - b * b) - w * (a * a - b * b)
            worst = h if worst is None else max(worst, h)
    return worst is None or worst <= -8 * w
