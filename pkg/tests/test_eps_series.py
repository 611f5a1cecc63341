from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from breather.algebra import HarmonicPoly, SechPoly
from breather.eps_series import (
    GNumeric,
    apply_L,
    check_invariants,
    dump_series,
    eps_init,
    eps_series,
    invert_L,
    lambda_of,
    residual_orders,
    sech_dxx,
)
from breather.errors import LambdaNotPositive, NotInRangeForm
from oracles import sine_gordon_cells

S = SechPoly.monomial
SINE = GNumeric.preset("sine")
PHI4 = GNumeric.preset("phi4")


def cells(series, upto):
    out = {}
    for k in range(1, upto + 1):
        for q, a in series.v(k).items():
            for p, c in a.items():
                out[(k, q, p)] = c
    return out


def test_lambda_examples():
    assert lambda_of(SINE) == F(1, 8)
    assert lambda_of(PHI4) == F(3, 2)
    with pytest.raises(LambdaNotPositive, match="<= 0"):
        lambda_of(GNumeric.from_dict({2: F(0), 3: F(0)}))
    with pytest.raises(LambdaNotPositive):
        lambda_of(GNumeric.preset("sinh"))


@pytest.mark.parametrize("lam", [F(1, 8), F(3, 2), F(7, 3)])
def test_sech_dxx(lam):
    assert sech_dxx(S(1), lam) - S(1) + S(3, lam) == SechPoly()
    assert sech_dxx(S(2), lam) == S(2, 4) - S(4, 3 * lam)
    assert sech_dxx(S(3), lam) == S(3, 9) - S(5, 6 * lam)


def test_apply_and_invert_L_examples():
    lam = F(1, 8)
    assert apply_L(S(1), lam) == S(3, 2 * lam)
    assert apply_L(S(3), lam) == S(3, 8) - S(5, 3 * lam)
    assert apply_L(S(5), lam) == S(5, 24) - S(7, 12 * lam)
    assert invert_L(S(3, 2 * lam), lam) == S(1)
    assert invert_L(S(3, 8) - S(5, 3 * lam), lam) == S(3)
    assert invert_L(S(3), lam) == S(1, 1 / (2 * lam))


@pytest.mark.parametrize("bad", [S(2), S(0), S(1), S(4) + S(3)])
def test_invert_L_rejects(bad):
    with pytest.raises(NotInRangeForm):
        invert_L(bad, F(1, 8))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1, max_size=5),
       st.fractions(min_value=F(1, 9), max_value=4, max_denominator=9))
def test_L_inverts_on_range_form(cs, lam):
    rhs = SechPoly({2 * i + 3: c for i, c in enumerate(cs)})
    assert apply_L(invert_L(rhs, lam), lam) == rhs


@pytest.mark.parametrize("g", [SINE, PHI4], ids=["sine", "phi4"])
def test_first_orders_match_closed_forms(g):
    s = eps_init(g)
    g2, g3 = g.g(2), g.g(3)
    assert s.v(1) == HarmonicPoly({1: S(1)})
    assert s.v(2).get(0, SechPoly()) == S(2, -g2 / 2)
    assert s.v(2).get(2, SechPoly()) == S(2, g2 / 6)
    assert s.orders[1].pending_sigma
    assert s.v(3).get(3, SechPoly()) == S(3, (g2 ** 2 / 6 + g3 / 4) / 8)


def test_phi4_constant_part():
    assert eps_init(PHI4).v(2)[0] == S(2, F(-3, 4))


def test_sine_matches_arctan_expansion():
    s = eps_series(SINE, 7)
    assert s.resolved_depth() >= 5
    assert cells(s, 5) == sine_gordon_cells(5)


def test_sine_even_orders_vanish():
    s = eps_series(SINE, 9)
    for k in range(2, s.resolved_depth() + 1, 2):
        assert not s.v(k)


def test_sign_symmetry_for_odd_g():
    a, b = eps_series(SINE, 7, 1), eps_series(SINE, 7, -1)
    assert b.v(1) == HarmonicPoly({1: S(1, -1)})
    for k in range(1, a.resolved_depth() + 1):
        assert b.v(k) == (a.v(k) if k % 2 == 0 else -a.v(k))


def test_minus_branch_solves_equation_for_even_g():
    b = eps_series(PHI4, 6, -1)
    assert b.v(1) == HarmonicPoly({1: S(1, -1)})
    assert not any(residual_orders(b, b.depth).values())


@pytest.mark.parametrize("g", [SINE, PHI4], ids=["sine", "phi4"])
def test_invariants_and_residual(g):
    s = eps_series(g, 7)
    check_invariants(s)
    res = residual_orders(s, s.depth)
    assert all(not r for r in res.values())


def test_last_two_orders_pending():
    s = eps_series(PHI4, 6)
    flags = [c.pending_sigma for c in s.orders]
    assert flags[-2:] == [True, True] and not any(flags[:-2])


def test_dump_format():
    text = dump_series(eps_init(SINE))
    assert text.splitlines()[0] == "# eps-series preset=sine lambda=1/8 sign=+1 orders=3"
    assert "k=1 q=1 S" in text
    assert "k=2 q=1 sigma_2 pending" in text
    assert "k=3 q=3 -1/192*S^3" in text
    assert dump_series(eps_init(SINE)) == text
