"""Small-amplitude series ``v = sum_k eps^k v_k(tau, xi)``.

Each order is a cosine polynomial whose coefficients are polynomials in the
soliton profile ``S(xi) = sqrt(2/lambda)/cosh(xi)``::

    v_k = sum_q a_kq(S) cos(q tau)

Order ``m`` solves ``v_m,tautau + v_m = Delta v_{m-2} - [sum_j g_j v^j]_m``.
The ``cos tau`` part ``sigma_m`` of ``v_m`` is fixed only two orders later by
the secular condition ``L sigma_{m-2} = -(cos tau coefficient)``, so the two
newest orders of an :class:`EpsSeries` always carry a pending ``sigma``
(stored as zero and flagged).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import HarmonicPoly, SechPoly, cos_mul
from .errors import ConsistencyError, LambdaNotPositive, NotInRangeForm
from .presets import preset_coefficient

__all__ = [
    "GNumeric",
    "EpsCoefficient",
    "EpsSeries",
    "lambda_of",
    "sech_dxx",
    "apply_L",
    "invert_L",
    "eps_init",
    "eps_extend",
    "eps_series",
    "order_rhs",
    "residual_orders",
    "check_invariants",
    "dump_series",
]


@dataclass(frozen=True)
class GNumeric:
    """Numeric coefficients ``g2, g3, ..., gM`` (``g1 = 1`` implicit)."""

    coeffs: tuple[Fraction, ...] = ()
    name: str | None = None

    @classmethod
    def from_dict(cls, d: dict[int, Fraction], name: str | None = None) -> "GNumeric":
        top = max(d, default=1)
        return cls(tuple(Fraction(d.get(m, 0)) for m in range(2, top + 1)), name)

    @classmethod
    def preset(cls, name: str, max_m: int = 15) -> "GNumeric":
        return cls(tuple(preset_coefficient(name, m) for m in range(2, max_m + 1)), name)

    def g(self, m: int) -> Fraction:
        if m < 2:
            raise ValueError("m >= 2 expected")
        i = m - 2
        return self.coeffs[i] if i < len(self.coeffs) else Fraction(0)

    @property
    def max_m(self) -> int:
        return len(self.coeffs) + 1


@dataclass(frozen=True)
class EpsCoefficient:
    k: int
    harmonics: HarmonicPoly
    pending_sigma: bool = False

    def a(self, q: int) -> SechPoly:
        return self.harmonics.get(q, SechPoly())


@dataclass(frozen=True)
class EpsSeries:
    lam: Fraction
    sign: int
    g: GNumeric
    orders: tuple[EpsCoefficient, ...] = field(default_factory=tuple)

    @property
    def depth(self) -> int:
        return len(self.orders)

    def v(self, k: int) -> HarmonicPoly:
        return self.orders[k - 1].harmonics

    def sigma(self, k: int) -> SechPoly | None:
        """Resolved ``sigma_k`` (the ``cos tau`` part of ``v_k``), or ``None`` if pending."""
        c = self.orders[k - 1]
        return None if c.pending_sigma else c.a(1)

    def resolved_depth(self) -> int:
        return sum(1 for c in self.orders if not c.pending_sigma)


def lambda_of(g: GNumeric) -> Fraction:
    """``(5/6) g2^2 - (3/4) g3``; raises :class:`LambdaNotPositive` if ``<= 0``."""
    lam = Fraction(5, 6) * g.g(2) ** 2 - Fraction(3, 4) * g.g(3)
    if lam <= 0:
        raise LambdaNotPositive(lam)
    return lam


def sech_dxx(p: SechPoly, lam: Fraction) -> SechPoly:
    """Second xi-derivative: ``(S^p)'' = p^2 S^p - p(p+1) lam/2 S^(p+2)``."""
    out: dict[int, Fraction] = {}
    for k, c in p.items():
        out[k] = out.get(k, Fraction(0)) + k * k * c
        out[k + 2] = out.get(k + 2, Fraction(0)) - Fraction(k * (k + 1), 2) * lam * c
    return SechPoly(out)


def _L_coeffs(p: int) -> tuple[int, Fraction]:
    return p * p - 1, 3 - Fraction(p * (p + 1), 2)


def apply_L(p: SechPoly, lam: Fraction) -> SechPoly:
    """``L = d^2/dxi^2 - 1 + 6/cosh^2 xi`` acting on a polynomial in ``S``."""
    out: dict[int, Fraction] = {}
    for k, c in p.items():
        a, b = _L_coeffs(k)
        out[k] = out.get(k, Fraction(0)) + a * c
        out[k + 2] = out.get(k + 2, Fraction(0)) + b * lam * c
    return SechPoly(out)


def invert_L(rhs: SechPoly, lam: Fraction) -> SechPoly:
    """The even decaying ``sigma = S Q(S^2)`` with ``L sigma = rhs``.

    ``rhs`` must contain only odd powers ``>= 3``.  The system is triangular:
    the coefficient of ``S^k`` in ``L sigma`` is
    ``(k^2 - 1) c_k + (3 - (k-2)(k-1)/2) lam c_(k-2)``, solved from the top.
    """
    for p in rhs.powers():
        if p % 2 == 0 or p < 3:
            raise NotInRangeForm(f"term S^{p} is not of the form S^3 P(S^2): {rhs}")
    if not rhs:
        return SechPoly()
    top = rhs.degree()
    c: dict[int, Fraction] = {}
    for k in range(top, 2, -2):
        a, _ = _L_coeffs(k)
        _, b = _L_coeffs(k - 2)
        c[k - 2] = (rhs.coeff(k) - a * c.get(k, Fraction(0))) / (b * lam)
    return SechPoly(c)


def _delta(v: HarmonicPoly, lam: Fraction) -> HarmonicPoly:
    return HarmonicPoly({q: sech_dxx(a, lam) - a * (q * q) for q, a in v.items()})


def order_rhs(m: int, vs: dict[int, HarmonicPoly], g: GNumeric, lam: Fraction) -> HarmonicPoly:
    """Right-hand side at order ``m``: ``Delta v_{m-2} - [sum_j g_j v^j]_m``."""
    out = _delta(vs[m - 2], lam) if m - 2 in vs else HarmonicPoly()
    # powers[j][k] = coefficient of eps^k in v^j, for k <= m
    prev = {k: vs[k] for k in range(1, m) if k in vs and vs[k]}
    for j in range(2, m + 1):
        cur: dict[int, HarmonicPoly] = {}
        for k in range(j, m + 1):
            acc = HarmonicPoly()
            for r in range(1, k - j + 2):
                if r in vs and (k - r) in prev:
                    acc = acc + cos_mul(vs[r], prev[k - r])
            if acc:
                cur[k] = acc
        gj = g.g(j)
        if gj and m in cur:
            out = out - cur[m].scale(gj)
        prev = cur
        if not prev:
            break
    return out


def _non_secular(rhs: HarmonicPoly) -> HarmonicPoly:
    return HarmonicPoly({q: a * Fraction(1, 1 - q * q) for q, a in rhs.items() if q != 1})


def _check_no_secular(rhs: HarmonicPoly, m: int) -> None:
    if rhs.get(1):
        raise ConsistencyError(f"order {m}: cos(tau) coefficient {rhs[1]} survived")


def eps_init(g: GNumeric, sign: int = 1) -> EpsSeries:
    """Orders 1 to 3 with ``sigma_2``, ``sigma_3`` pending."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lam = lambda_of(g)
    vs = {1: HarmonicPoly({1: SechPoly({1: sign})})}
    vs[2] = _non_secular(order_rhs(2, vs, g, lam))
    rhs3 = order_rhs(3, vs, g, lam)
    _check_no_secular(rhs3, 3)
    vs[3] = _non_secular(rhs3)
    orders = (
        EpsCoefficient(1, vs[1]),
        EpsCoefficient(2, vs[2], pending_sigma=True),
        EpsCoefficient(3, vs[3], pending_sigma=True),
    )
    return EpsSeries(lam, sign, g, orders)


def eps_extend(series: EpsSeries, g: GNumeric | None = None) -> EpsSeries:
    """Append order ``m = depth + 1`` and resolve ``sigma_{m-2}``."""
    g = series.g if g is None else g
    lam = series.lam
    n = series.depth
    if n < 3:
        raise ValueError("initialise with eps_init first")
    m = n + 1
    vs = {c.k: c.harmonics for c in series.orders}
    secular = order_rhs(m, vs, g, lam).get(1, SechPoly())
    try:
        sigma = invert_L(-secular, lam)
    except NotInRangeForm as exc:
        raise ConsistencyError(f"order {m}: secular term not in the range of L ({exc})") from exc
    fixed = dict(vs[m - 2].items())
    if sigma:
        fixed[1] = sigma
    else:
        fixed.pop(1, None)
    vs[m - 2] = HarmonicPoly(fixed)
    rhs_prev = order_rhs(m - 1, vs, g, lam)
    _check_no_secular(rhs_prev, m - 1)
    vs[m - 1] = _non_secular(rhs_prev)
    rhs_new = order_rhs(m, vs, g, lam)
    _check_no_secular(rhs_new, m)
    vs[m] = _non_secular(rhs_new)
    orders = []
    for c in series.orders:
        if c.k < m - 2:
            orders.append(c)
    orders.append(EpsCoefficient(m - 2, vs[m - 2]))
    orders.append(EpsCoefficient(m - 1, vs[m - 1], pending_sigma=True))
    orders.append(EpsCoefficient(m, vs[m], pending_sigma=True))
    return EpsSeries(lam, series.sign, series.g, tuple(orders))


def eps_series(g: GNumeric, order: int, sign: int = 1) -> EpsSeries:
    """Series through ``order`` (at least 3 orders are always built)."""
    s = eps_init(g, sign)
    while s.depth < order:
        s = eps_extend(s, g)
    return s


def residual_orders(series: EpsSeries, upto: int) -> dict[int, HarmonicPoly]:
    """Coefficients of ``eps^j`` (``j <= upto``) left after substituting the
    partial sum into ``v_tt + v - eps^2 (v_tt + v_xx) + sum g_m v^m``."""
    lam, g = series.lam, series.g
    vs = {c.k: c.harmonics for c in series.orders}
    out = {}
    for j in range(1, upto + 1):
        own = HarmonicPoly({q: a * (1 - q * q) for q, a in vs[j].items()}) if j in vs else HarmonicPoly()
        rhs = order_rhs(j, {k: v for k, v in vs.items() if k < j}, g, lam)
        out[j] = own - rhs
    return out


def check_invariants(series: EpsSeries) -> None:
    """Assert the structural facts on every order (raises ``ConsistencyError``)."""
    for c in series.orders:
        k = c.k
        for q, a in c.harmonics.items():
            if (k + q) % 2:
                raise ConsistencyError(f"a_{k},{q} nonzero with k+q odd")
            if a.degree() > k:
                raise ConsistencyError(f"deg a_{k},{q} = {a.degree()} > {k}")
            if a.coeff(0):
                raise ConsistencyError(f"a_{k},{q} not divisible by S")
            if any((p - k) % 2 for p in a.powers()):
                raise ConsistencyError(f"a_{k},{q} has powers of the wrong parity")


def dump_series(series: EpsSeries) -> str:
    """Canonical text: one line per (k, q) plus pending markers."""
    name = series.g.name or "custom"
    lines = [f"# eps-series preset={name} lambda={series.lam} sign={series.sign:+d} orders={series.depth}"]
    for c in series.orders:
        qs = sorted(set(c.harmonics.harmonics()) | ({1} if c.pending_sigma else set()))
        for q in qs:
            if q == 1 and c.pending_sigma:
                lines.append(f"k={c.k} q=1 sigma_{c.k} pending")
            else:
                lines.append(f"k={c.k} q={q} {c.a(q).text()}")
        if not qs:
            lines.append(f"k={c.k} 0")
    return "\n".join(lines) + "\n"
