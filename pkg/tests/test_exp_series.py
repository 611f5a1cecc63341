import json
import os
from fractions import Fraction as F

import pytest

from breather.algebra import FactoredRational, HarmonicPoly, ParamPoly, cos_mul, h_factor
from breather.exp_series import (
    GSpec,
    all_conditions,
    exceptional_check,
    exceptional_reference,
    expand_exp,
    forced_coefficients,
    pole_candidates,
    residue_conditions,
)
from oracles import sin_taylor, sinh_taylor

P = ParamPoly.parse
GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "conditions_odd_g3.json")
SINE_VALUES = {"g5": F(1, 120), "g7": F(-1, 5040), "g9": F(1, 362880)}


def odd_series():
    return expand_exp(GSpec({3: F(-1, 6)}, frozenset({5, 7, 9}), 9), 9)


def proportional(a: ParamPoly, b: ParamPoly) -> bool:
    return a.primitive()[1] == b.primitive()[1]


def test_u2_with_symbolic_g2():
    s = expand_exp(GSpec({}, frozenset({2}), 2), 2)
    assert s.u(2).coeff(0) == FactoredRational(P("g2"), {(2, 0): 1}, 0, F(-1, 2))
    assert s.u(2).coeff(2) == FactoredRational(P("g2"), {}, 0, F(1, 6))


def test_u3_with_symbolic_g3():
    s = expand_exp(GSpec({}, frozenset({3}), 3), 3)
    assert s.u(2).coeff(0) == FactoredRational(0) and not s.u(2).harmonics
    assert s.u(3).coeff(1) == FactoredRational(P("g3"), {}, 1, F(3, 32))
    assert s.u(3).coeff(3) == FactoredRational(P("g3"), {}, 0, F(1, 32))


def test_linear_reduces_to_first_term():
    s = expand_exp(GSpec.preset("linear", 9), 9)
    assert all(not s.u(l).harmonics for l in range(2, 10))


def test_harmonic_parity_and_odd_g():
    s = expand_exp(GSpec.preset("phi4", 6), 6)
    for c in s.coeffs:
        assert all(q <= c.l and (c.l - q) % 2 == 0 for q in c.harmonics.harmonics())
    t = expand_exp(GSpec.preset("sine", 9), 9)
    for c in t.coeffs:
        if c.l % 2 == 0:
            assert not c.harmonics
        assert all(q % 2 for q in c.harmonics.harmonics())


def test_scaling_covariance():
    g = GSpec({2: F(1, 3), 3: F(-1, 5)}, frozenset({4}), 5)
    a = expand_exp(g, 5)
    b = expand_exp(g, 5, u1_scale=2)
    for l in range(1, 6):
        for q in a.u(l).harmonics.harmonics():
            assert b.u(l).coeff(q) == a.u(l).coeff(q) * F(2) ** l


def _series_residual(series, g):
    """Re-substitute the partial sum into the amplitude equation: for each
    l <= L the e^{-l xi} part of h(l,q) u_lq + [sum g_m u^m]_lq must vanish."""
    L = series.L
    u = {c.l: c.harmonics for c in series.coeffs}
    powers = {1: u}
    for m in range(2, L + 1):
        prev, nxt = powers[m - 1], {}
        for i, a in prev.items():
            for j, b in u.items():
                if i + j <= L:
                    nxt[i + j] = nxt.get(i + j, HarmonicPoly()) + cos_mul(a, b)
        powers[m] = nxt
    res = {}
    for l in range(1, L + 1):
        tot = HarmonicPoly({q: x * FactoredRational(h_factor(l, q)) for q, x in u[l].items()}) \
            if l > 1 else HarmonicPoly()
        for m in range(2, l + 1):
            gm = g.coeff(m)
            if gm and l in powers[m]:
                tot = tot + powers[m][l].scale(gm)
        res[l] = tot
    return res


@pytest.mark.parametrize("g", [
    GSpec({3: F(-1, 6)}, frozenset({5}), 7),
    GSpec.preset("phi4", 5),
    GSpec({}, frozenset({2, 3}), 4),
], ids=["odd-symbolic", "phi4", "g2g3"])
def test_amplitude_equation_residual(g):
    s = expand_exp(g, g.max_m)
    assert all(not r for r in _series_residual(s, g).values())


def test_pole_candidates_examples():
    rows = {r.w0: r for r in pole_candidates(7)}
    assert rows[F(1, 4)].eps_label == "1/2" and (2, 0) in rows[F(1, 4)].provenance
    assert rows[F(-1, 2)].eps_label == "i/√2" and (5, 3) in rows[F(-1, 2)].provenance
    assert rows[F(-1)].eps_label == "i" and (7, 5) in rows[F(-1)].provenance
    assert all(q != 1 for r in rows.values() for _, q in r.provenance)
    assert len(rows) == len(pole_candidates(7))


@pytest.mark.parametrize("l,q,w0,expect", [
    (7, 1, F(-1, 2), "1 - 120*g5"),
    (7, 3, F(-1, 5), "1 - 129*g5 - 378*g7"),
    (7, 5, F(-1), "g5 + 42*g7"),
    (9, 7, F(-1, 2), "1 - (120*g5)^2"),
    (9, 3, F(-1, 9), "2500 - 338305*g5 + 1109760*g5^2 - 1239210*g7 - 1354752*g9"),
])
def test_residue_conditions_examples(l, q, w0, expect):
    conds = residue_conditions(odd_series(), l, q, w0)
    assert len(conds) == 1 and conds[0].order == 1
    assert proportional(conds[0].condition, P(expect))


def test_conditions_golden():
    with open(GOLDEN, encoding="utf-8") as fh:
        golden = json.load(fh)
    got = {(r.l, r.q, r.w0): r.condition for r in all_conditions(odd_series())}
    for row in golden["rows"]:
        key = (row["l"], row["q"], F(row["w0"]))
        assert key in got, key
        assert proportional(got[key], P(row["condition"])), key
    for cond in got.values():
        assert cond.subs(SINE_VALUES).is_zero()


def test_conditions_json_shape():
    r = all_conditions(odd_series())[0].as_dict()
    assert set(r) == {"l", "q", "w0", "eps_label", "order", "condition"}


def _solve_chain(conds, third, g5):
    """Solve two conditions linearly for (g7, g9) at fixed g5 and evaluate the third."""
    def ev(p, g7, g9):
        return p.subs({"g5": g5, "g7": g7, "g9": g9}).constant_term()
    p1, p2 = conds
    a = [[ev(p, 1, 0) - ev(p, 0, 0), ev(p, 0, 1) - ev(p, 0, 0)] for p in (p1, p2)]
    rhs = [-ev(p, 0, 0) for p in (p1, p2)]
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    g7 = (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det
    g9 = (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det
    return ev(third, g7, g9)


def test_pole_implications():
    by = {}
    for r in all_conditions(odd_series()):
        by.setdefault(r.w0, r.condition)
    A, B, C = by[F(-1, 2)], by[F(-1, 5)], by[F(-1)]
    # i and i/sqrt5 force g5 = 1/120, g7 = -1/5040, which satisfies (A)
    g7 = F(-1, 42) * F(1, 120)
    assert B.subs({"g5": F(1, 120), "g7": g7}).is_zero()
    assert A.subs({"g5": F(1, 120)}).is_zero()
    # i, i/3 and i sqrt(3/2): g5 = 1/120 or 3/10
    for g5 in (F(1, 120), F(3, 10)):
        assert _solve_chain((C, by[F(-1, 9)]), by[F(-3, 2)], g5) == 0
    # the 589/7680 and 1/7680 root pairs come from the i sqrt(3/7) condition
    for g5 in (F(1, 120), F(589, 7680)):
        assert _solve_chain((C, by[F(-1, 9)]), by[F(-3, 7)], g5) == 0
    for g5 in (F(1, 120), F(1, 7680)):
        assert _solve_chain((B, by[F(-1, 9)]), by[F(-3, 7)], g5) == 0


def test_forced_coefficients():
    assert forced_coefficients(F(-1, 6), 9) == {m: sin_taylor(m) for m in range(2, 10)}
    assert forced_coefficients(F(1, 6), 9) == {m: sinh_taylor(m) for m in range(2, 10)}
    assert all(v == 0 for v in forced_coefficients(F(0), 9).values())
    got = forced_coefficients(F(-1, 2), 9)
    assert got == exceptional_reference(F(-1, 2), 9)
    assert got[5] == F(3, 40)


@pytest.mark.parametrize("name", ["sine", "sinh", "linear"])
def test_exceptional_families(name):
    rep = exceptional_check(expand_exp(GSpec.preset(name, 9), 9), F(1, 2))
    assert rep.exceptional


def test_phi4_real_pole_survives():
    rep = exceptional_check(expand_exp(GSpec.preset("phi4", 2), 2), F(1, 2))
    assert [(p.l, p.q, p.w0) for p in rep.surviving] == [(2, 0, F(1, 4))]


def test_g5_three_tenths_leaves_7_1():
    g = GSpec({3: F(-1, 6), 5: F(3, 10)}, max_m=7)
    rep = exceptional_check(expand_exp(g, 7), F(1, 2))
    assert (7, 1, F(-1, 2)) in {(p.l, p.q, p.w0) for p in rep.surviving}


def test_even_l_pole_location():
    # even l forces through the q = 0 pole at w = 1/l^2
    g = GSpec({2: F(0), 3: F(-1, 6), 4: F(1, 7)}, max_m=4)
    rep = exceptional_check(expand_exp(g, 4), F(1, 2))
    assert (4, 0, F(1, 16)) in {(p.l, p.q, p.w0) for p in rep.surviving}
