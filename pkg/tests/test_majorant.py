import math
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from breather.exp_series import GSpec
from breather.majorant import convergence_xi_min, dominate, h_gap_check, shg_abar, shg_b

EPS_SET = [F(1, 10), F(1, 4), F(1, 2), F(7, 10)]


def test_shg_b_low_orders():
    assert shg_b(0, 0).value_poly == {1: 8}
    assert shg_b(1, 1).value_poly == {3: F(8, 3)}
    assert shg_b(1, 0).value_poly == {1: 8, 3: 8}
    with pytest.raises(ValueError):
        shg_b(1, 2)


@pytest.mark.parametrize("r,xi", [(0.3, 2.5), (0.8, 3.0), (1.5, 4.0)])
def test_shg_b_resums_to_closed_form(r, xi):
    # 4 artanh(r cos tau / sinh xi) against sum_ls b_ls(r) e^{-(2l+1) xi} cos((2s+1) tau)
    for tau in (0.0, 0.7, 2.1):
        exact = 4 * math.atanh(r * math.cos(tau) / math.sinh(xi))
        approx = sum(shg_b(l, s)(r) * math.exp(-(2 * l + 1) * xi) * math.cos((2 * s + 1) * tau)
                     for l in range(12) for s in range(l + 1))
        assert approx == pytest.approx(exact, rel=1e-12, abs=1e-15)


def test_shg_b_structure():
    for l in range(7):
        for s in range(l + 1):
            b = shg_b(l, s).value_poly
            assert min(b) == 2 * s + 1 and max(b) == 2 * l + 1
            assert all(n % 2 for n in b) and all(c > 0 for c in b.values())


def test_shg_abar_examples():
    for e in EPS_SET:
        assert shg_abar(0, 0, e) == e
    assert shg_abar(1, 1, F(1, 2)) == F(1, 1536)
    assert shg_abar(1, 0, F(1, 2)) == (8 * F(1, 2) * F(3, 4) + 8 * F(1, 8)) / 512
    with pytest.raises(TypeError):
        shg_abar(0, 0, 0.5)
    with pytest.raises(ValueError):
        shg_abar(0, 0, F(1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.fractions(min_value=F(1, 100), max_value=F(99, 100), max_denominator=100))
def test_abar_nonnegative(l, e):
    assert all(shg_abar(l, s, e) >= 0 for s in range(l + 1))


@pytest.mark.parametrize("name", ["sinh", "sine"])
def test_exceptional_series_equal_majorant(name):
    rep = dominate(GSpec.preset(name, 11), F(1, 4), 5)
    assert rep.verdict and rep.equal_everywhere
    assert rep.entries[0].a == F(1, 4)


def test_small_cubic_strictly_dominated():
    rep = dominate(GSpec({3: F(1, 12)}, max_m=11), F(1, 4), 5)
    assert rep.verdict and rep.strict_somewhere and not rep.equal_everywhere


def test_dominate_rejects_bad_g():
    with pytest.raises(ValueError):
        dominate(GSpec({3: F(1, 5)}, max_m=5), F(1, 4), 2)
    with pytest.raises(ValueError):
        dominate(GSpec.preset("phi4", 5), F(1, 4), 2)


def test_table_format():
    text = dominate(GSpec.preset("sinh", 3), F(1, 2), 1).table()
    assert text.splitlines()[0] == "l s |a_ls| abar_ls ratio"
    assert "1 1 1/1536 1/1536 1" in text


def test_convergence_xi_min():
    assert convergence_xi_min(1e-9) == pytest.approx(math.log(1 / 8), abs=1e-8)
    e = 0.6
    x = convergence_xi_min(e)
    r, a = 0.75, math.log(0.1)
    assert x == pytest.approx(a + math.asinh(r), abs=1e-12)
    assert abs(r / math.sinh(x - a)) == pytest.approx(1.0)
    assert convergence_xi_min(0.999999) > convergence_xi_min(0.99)


def test_h_gap_check():
    assert h_gap_check(1, F(1, 2))
    assert h_gap_check(3, F(1, 10))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert h_gap_check(4, 0)
        assert w
