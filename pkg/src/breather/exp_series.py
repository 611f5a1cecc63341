"""The decaying series ``u = sum_l u_l(tau, eps) exp(-l xi)`` and its poles.

With ``w = eps^2`` the coefficient of ``exp(-l xi)`` obeys ``M_l u_l = f_l``
where ``M_l = (1 - w) d^2/dtau^2 + (1 - l^2 w)`` and ``f_l`` is the
``exp(-l xi)`` part of ``-sum_m g_m u^m``.  On ``cos(q tau)`` the operator is
multiplication by ``h(l, q) = 1 - q^2 - w (l^2 - q^2)``, so every ``u_l`` is a
cosine polynomial with coefficients rational in ``w``.  Roots of those
denominators that survive cancellation are the poles analysed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import (
    FactoredRational,
    HarmonicPoly,
    ParamPoly,
    cos_mul,
    eps_label,
    h_root,
    laurent_lead,
    laurent_principal,
)
from .errors import ConsistencyError
from .presets import preset_coefficient

__all__ = [
    "GSpec",
    "ExpCoefficient",
    "ExpSeries",
    "PoleCandidate",
    "PoleCondition",
    "SurvivingPole",
    "ExceptionalReport",
    "expand_exp",
    "pole_candidates",
    "residue_conditions",
    "all_conditions",
    "forced_coefficients",
    "exceptional_reference",
    "exceptional_check",
    "dump_exp",
]

UNIT = "unit"
EPS = "eps"


@dataclass(frozen=True)
class GSpec:
    """Coefficients ``g_m`` for ``2 <= m <= max_m``: some numeric, some symbolic.

    Anything neither numeric nor symbolic is zero.
    """

    numeric: dict = field(default_factory=dict)
    symbolic: frozenset = frozenset()
    max_m: int = 15
    name: str | None = None

    def __post_init__(self):
        num = {int(m): Fraction(v) for m, v in self.numeric.items()}
        sym = frozenset(int(m) for m in self.symbolic)
        if set(num) & sym:
            raise ValueError(f"g{min(set(num) & sym)} is both numeric and symbolic")
        if any(m < 2 for m in set(num) | sym):
            raise ValueError("coefficient indices start at 2")
        object.__setattr__(self, "numeric", num)
        object.__setattr__(self, "symbolic", sym)

    @classmethod
    def preset(cls, name: str, max_m: int = 15, symbolic=()) -> "GSpec":
        sym = frozenset(symbolic)
        num = {m: preset_coefficient(name, m) for m in range(2, max_m + 1) if m not in sym}
        return cls({m: v for m, v in num.items() if v}, sym, max_m, name)

    @classmethod
    def odd(cls, g3, symbolic=(), max_m: int = 15, **fixed) -> "GSpec":
        """Odd ``g`` with ``g3`` fixed, the listed odd indices symbolic, and
        extra numeric values given as ``g5=...`` keywords."""
        num = {3: Fraction(g3)}
        for k, v in fixed.items():
            num[int(k.lstrip("g"))] = Fraction(v)
        return cls(num, frozenset(symbolic), max_m)

    def coeff(self, m: int) -> ParamPoly:
        if m > self.max_m:
            return ParamPoly(0)
        if m in self.symbolic:
            return ParamPoly.var(f"g{m}")
        return ParamPoly(self.numeric.get(m, Fraction(0)))

    def value(self, m: int) -> Fraction:
        if m in self.symbolic:
            raise ValueError(f"g{m} is symbolic")
        return self.numeric.get(m, Fraction(0)) if m <= self.max_m else Fraction(0)

    def is_odd(self) -> bool:
        return not any(m % 2 == 0 for m in self.symbolic) and not any(
            v for m, v in self.numeric.items() if m % 2 == 0
        )

    def is_numeric(self) -> bool:
        return not self.symbolic

    def bindings(self) -> dict[str, Fraction]:
        return {f"g{m}": v for m, v in self.numeric.items()}


@dataclass(frozen=True)
class ExpCoefficient:
    """``u_l`` as a cosine polynomial over :class:`FactoredRational`.

    In the eps normalization the true coefficient is ``eps**eps_power`` times
    the stored one (the even part of ``eps**l`` is already folded in as a
    power of ``w``).
    """

    l: int
    harmonics: HarmonicPoly
    eps_power: int = 0

    def coeff(self, q: int) -> FactoredRational:
        return self.harmonics.get(q, FactoredRational(0))


@dataclass(frozen=True)
class ExpSeries:
    g: GSpec
    normalization: str
    coeffs: tuple[ExpCoefficient, ...]

    @property
    def L(self) -> int:
        return len(self.coeffs)

    def u(self, l: int) -> ExpCoefficient:
        return self.coeffs[l - 1]

    def value(self, l: int, q: int, eps: Fraction) -> Fraction:
        """Exact numeric coefficient of ``exp(-l xi) cos(q tau)`` at rational ``eps``."""
        from .algebra import eval_w

        c = self.u(l)
        x = eval_w(c.coeff(q), Fraction(eps) ** 2, self.g.bindings() or None)
        return x * Fraction(eps) ** c.eps_power


def expand_exp(g: GSpec, L: int, normalization: str = UNIT, u1_scale=1) -> ExpSeries:
    """Coefficients ``u_1 .. u_L`` with ``u_1 = u1_scale * cos(tau)``
    (times ``eps`` in the eps normalization)."""
    if L < 1:
        raise ValueError("L >= 1 required")
    if normalization not in (UNIT, EPS):
        raise ValueError(f"normalization must be {UNIT!r} or {EPS!r}")
    gs = {m: g.coeff(m) for m in range(2, min(g.max_m, L) + 1)}
    gs = {m: c for m, c in gs.items() if c}
    us: dict[int, HarmonicPoly] = {1: HarmonicPoly({1: FactoredRational.const(u1_scale)})}
    # pw[(j, k)]: coefficient of exp(-k xi) in u^j
    pw: dict[tuple[int, int], HarmonicPoly] = {(1, 1): us[1]}
    top_m = max(gs, default=1)
    for l in range(2, L + 1):
        for j in range(2, min(l, top_m) + 1):
            acc = HarmonicPoly()
            for r in range(1, l - j + 2):
                a, b = us.get(r), pw.get((j - 1, l - r))
                if a and b:
                    acc = acc + cos_mul(a, b)
            if acc:
                pw[(j, l)] = acc
        rhs = HarmonicPoly()
        for m, gm in gs.items():
            p = pw.get((m, l))
            if p:
                rhs = rhs - p.scale(FactoredRational(gm))
        ul = HarmonicPoly({q: c.div_h(l, q) for q, c in rhs.items()})
        us[l] = ul
        pw[(1, l)] = ul
    coeffs = []
    for l in range(1, L + 1):
        h = us[l]
        if normalization == EPS and l >= 2:
            h = h.map(lambda q, c, k=l // 2: c.mul_w(k).cancel())
        elif normalization == EPS:
            h = us[1]
        coeffs.append(ExpCoefficient(l, h, eps_power=(l % 2) if normalization == EPS else 0))
    return ExpSeries(g, normalization, tuple(coeffs))


@dataclass(frozen=True)
class PoleCandidate:
    l: int
    q: int
    w0: Fraction
    eps_label: str
    provenance: tuple[tuple[int, int], ...]


def pole_candidates(L: int) -> list[PoleCandidate]:
    """Every root ``w0 = (1-q^2)/(l^2-q^2)``, ``2 <= l <= L``, ``q < l``,
    ``q = l mod 2``, ``q != 1``; one entry per distinct root, listing all
    ``(l, q)`` that produce it."""
    seen: dict[Fraction, list[tuple[int, int]]] = {}
    for l in range(2, L + 1):
        for q in range(l % 2, l, 2):
            if q == 1:
                continue
            seen.setdefault(h_root(l, q), []).append((l, q))
    out = []
    for w0, prov in seen.items():
        l, q = prov[0]
        out.append(PoleCandidate(l, q, w0, eps_label(w0), tuple(prov)))
    return out


@dataclass(frozen=True)
class PoleCondition:
    l: int
    q: int
    w0: Fraction
    eps_label: str
    order: int
    condition: ParamPoly

    def text(self) -> str:
        return self.condition.text()

    def as_dict(self) -> dict:
        return {
            "l": self.l,
            "q": self.q,
            "w0": str(self.w0),
            "eps_label": self.eps_label,
            "order": self.order,
            "condition": self.condition.text(),
        }


def residue_conditions(series: ExpSeries, l: int, q: int, w0) -> list[PoleCondition]:
    """The condition for the ``(l, q)`` coefficient to be regular at ``w0``.

    Returns one :class:`PoleCondition` carrying the leading Laurent
    coefficient (a polynomial in the symbolic ``g``), or ``[]`` when the
    coefficient has no pole there.  A constant leading coefficient is
    reported too: it is a pole that no choice of the symbols removes.
    """
    w0 = Fraction(w0)
    x = series.u(l).coeff(q)
    if not x:
        return []
    order, lead = laurent_lead(x, w0)
    if order <= 0:
        return []
    return [PoleCondition(l, q, w0, eps_label(w0), order, lead)]


def all_conditions(series: ExpSeries, l_min: int = 2, include_origin: bool = False) -> list[PoleCondition]:
    """Conditions at every denominator root of every ``u_l``, ``l >= l_min``.

    Ordered by ``l``, then ``q``, then decreasing ``w0`` (nearest the origin
    on the imaginary axis first).  The root ``w0 = 0`` from ``h(l, 1)`` is
    skipped unless ``include_origin``.
    """
    out = []
    for c in series.coeffs:
        if c.l < l_min:
            continue
        for q, x in c.harmonics.items():
            roots = sorted(x.roots(), reverse=True)
            for w0 in roots:
                if w0 == 0 and not include_origin:
                    continue
                out.extend(residue_conditions(series, c.l, q, w0))
    return out


def _forcing_root(l: int) -> tuple[int, Fraction]:
    if l % 2 == 0:
        return 0, Fraction(1, l * l)
    return 3, Fraction(-8, l * l - 9)


def forced_coefficients(g3, L: int, check: bool = True) -> dict[int, Fraction]:
    """Coefficients ``g_2 .. g_L`` forced by cancelling, order by order, the
    ``q = 0`` pole at ``w = 1/l^2`` (even ``l``) and the ``q = 3`` pole at
    ``w = -8/(l^2 - 9)`` (odd ``l >= 5``), with ``g3`` given.

    ``check`` re-expands with the result and raises ``ConsistencyError`` if a
    pole with ``|w0| <= 1/2`` survives.
    """
    g3 = Fraction(g3)
    fixed: dict[int, Fraction] = {3: g3}
    for l in range(2, L + 1):
        if l == 3:
            continue
        spec = GSpec({m: v for m, v in fixed.items() if v}, frozenset({l}), max_m=l)
        ser = expand_exp(spec, l)
        q, w0 = _forcing_root(l)
        x = ser.u(l).coeff(q)
        principal = laurent_principal(x, w0) if x else []
        # leading Laurent coefficient, linear in g_l
        lead = next((c for _, c in principal if c), ParamPoly(0))
        if not lead:
            fixed[l] = Fraction(0)
            continue
        name = f"g{l}"
        if lead.degree(name) != 1 or lead.variables() - {name}:
            raise ConsistencyError(f"g{l}: residue {lead.text()} is not linear in {name}")
        a = lead.subs({name: 1}) - lead.subs({name: 0})
        b = lead.subs({name: 0})
        fixed[l] = -b.constant_term() / a.constant_term()
    out = {m: fixed.get(m, Fraction(0)) for m in range(2, L + 1)}
    if check:
        rep = exceptional_check(expand_exp(GSpec({m: v for m, v in out.items() if v}, max_m=L), L), Fraction(1, 2))
        if rep.surviving:
            raise ConsistencyError(f"forced coefficients leave poles: {rep.surviving}")
    return out


def exceptional_reference(g3, L: int) -> dict[int, Fraction]:
    """``g_{2m+1} = sgn(g3)^m alpha^{2m}/(2m+1)!`` with ``alpha^2 = 6|g3|``, even ones zero."""
    g3 = Fraction(g3)
    sgn = (g3 > 0) - (g3 < 0)
    a2 = 6 * abs(g3)
    out = {}
    for k in range(2, L + 1):
        if k % 2:
            m = (k - 1) // 2
            out[k] = Fraction(sgn**m) * a2**m / factorial(k)
        else:
            out[k] = Fraction(0)
    return out


@dataclass(frozen=True)
class SurvivingPole:
    l: int
    q: int
    w0: Fraction
    eps_label: str
    order: int

    def as_dict(self) -> dict:
        return {"l": self.l, "q": self.q, "w0": str(self.w0), "eps_label": self.eps_label, "order": self.order}


@dataclass(frozen=True)
class ExceptionalReport:
    bound: Fraction
    L: int
    surviving: tuple[SurvivingPole, ...]
    origin: tuple[tuple[int, int], ...]  # (l, q) with a pole at w = 0

    @property
    def exceptional(self) -> bool:
        return not self.surviving


def exceptional_check(series: ExpSeries, bound=Fraction(1, 2)) -> ExceptionalReport:
    """Every pole ``w0 != 0`` with ``|w0| <= bound`` left after cancellation.

    Requires a fully numeric ``g``.  Poles at the origin (from ``h(l, 1)``)
    are listed separately.
    """
    if not series.g.is_numeric():
        raise ValueError("exceptional_check needs numeric coefficients")
    bound = Fraction(bound)
    surv, origin = [], []
    for c in series.coeffs:
        for q, x in c.harmonics.items():
            for w0, (_, _m) in sorted(x.roots().items(), reverse=True):
                if w0 == 0:
                    origin.append((c.l, q))
                    continue
                if abs(w0) > bound:
                    continue
                order, _ = laurent_lead(x, w0)
                if order > 0:
                    surv.append(SurvivingPole(c.l, q, w0, eps_label(w0), order))
    return ExceptionalReport(bound, series.L, tuple(surv), tuple(origin))


def dump_exp(series: ExpSeries) -> str:
    """Canonical text, one line per ``(l, q)``."""
    name = series.g.name or "custom"
    sym = ",".join(f"g{m}" for m in sorted(series.g.symbolic)) or "-"
    lines = [f"# exp-series preset={name} symbolic={sym} normalization={series.normalization} L={series.L}"]
    for c in series.coeffs:
        tag = f" eps^{c.eps_power}*" if c.eps_power else " "
        if not c.harmonics:
            lines.append(f"l={c.l} 0")
        for q, x in c.harmonics.items():
            lines.append(f"l={c.l} q={q}{tag}{x.text()}")
    return "\n".join(lines) + "\n"
