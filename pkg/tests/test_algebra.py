from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from breather.algebra import (
    FactoredRational,
    HarmonicPoly,
    ParamPoly,
    cos_mul,
    eps_label,
    eval_w,
    h_factor,
    h_root,
    harmonic_pow,
    laurent_lead,
    rf_cancel,
)
from breather.errors import PoleAtEvaluationPoint

P = ParamPoly.parse
VARS = ["w", "g2", "g3", "g5"]


@st.composite
def polys(draw, max_terms=4):
    out = ParamPoly(0)
    for _ in range(draw(st.integers(0, max_terms))):
        c = F(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
        term = ParamPoly(c)
        for v in VARS:
            e = draw(st.integers(0, 2))
            if e:
                term = term * ParamPoly.var(v, e)
        out = out + term
    return out


@st.composite
def harmonics(draw, odd=False):
    qs = st.integers(0, 5).map(lambda k: 2 * k + 1) if odd else st.integers(0, 6)
    d = draw(st.dictionaries(qs, st.fractions(min_value=-3, max_value=3, max_denominator=5), max_size=3))
    return HarmonicPoly(d)


def test_h_factor_examples():
    assert h_factor(2, 0) == P("1 - 4*w")
    assert h_factor(3, 3) == ParamPoly(-8)
    assert h_factor(7, 5) == P("-24 - 24*w")
    assert h_root(7, 5) == -1
    assert h_root(5, 3) == F(-1, 2)


@pytest.mark.parametrize("l", range(2, 12))
def test_h_factor_nonzero_with_expected_root(l):
    for q in range(l + 1):
        h = h_factor(l, q)
        assert h
        if q != l:
            assert h_root(l, q) == F(1 - q * q, l * l - q * q)


def test_rf_cancel_examples():
    x = FactoredRational(P("(1-4*w)*g2"), {(2, 0): 1})
    assert rf_cancel(x) == FactoredRational(P("g2"))
    y = FactoredRational(P("g2"), {(2, 0): 1})
    assert rf_cancel(y) == y and rf_cancel(y).factors == y.factors
    z = FactoredRational(P("(1-4*w)^2"), {(2, 0): 1})
    assert rf_cancel(z) == FactoredRational(P("1-4*w"))
    assert not rf_cancel(z).factors


def test_laurent_lead_examples():
    assert laurent_lead(FactoredRational(1, {(2, 0): 1}), F(1, 4)) == (1, ParamPoly(1))
    order, _ = laurent_lead(FactoredRational(P("g2")), F(1, 4))
    assert order <= 0
    order, lead = laurent_lead(FactoredRational(P("1 - 120*g5"), {(5, 3): 1}), F(-1, 2))
    assert order == 1 and lead == P("120*g5 - 1")


def test_laurent_double_pole():
    x = FactoredRational(P("g3"), {(2, 0): 2})
    assert laurent_lead(x, F(1, 4))[0] == 2


def test_eval_w_examples():
    assert eval_w(FactoredRational(P("g2"), {(2, 0): 1}), 0, {"g2": F(3, 2)}) == F(3, 2)
    with pytest.raises(PoleAtEvaluationPoint):
        eval_w(FactoredRational(1, {(2, 0): 1}), F(1, 4))
    # (1 - 120 g5)/(-8 w) at w = -1/2 with the sine value
    x = FactoredRational(P("1 - 120*g5"), {}, 1, F(-1, 8))
    assert eval_w(x, F(-1, 2), {"g5": F(1, 120)}) == 0


def test_cos_mul_examples():
    c1 = HarmonicPoly.cos(1)
    assert cos_mul(c1, c1) == HarmonicPoly({0: F(1, 2), 2: F(1, 2)})
    assert cos_mul(cos_mul(c1, c1), c1) == HarmonicPoly({1: F(3, 4), 3: F(1, 4)})
    assert cos_mul(HarmonicPoly.cos(2), HarmonicPoly.cos(3)) == HarmonicPoly({1: F(1, 2), 5: F(1, 2)})


def _brute_square(d):
    # product-to-sum over all index pairs
    out = {}
    for p, a in d.items():
        for q, b in d.items():
            for r in (p + q, abs(p - q)):
                out[r] = out.get(r, 0) + F(a * b, 2)
    return HarmonicPoly(out)


def test_harmonic_pow_examples():
    c1 = HarmonicPoly.cos(1)
    assert harmonic_pow(c1, 2) == HarmonicPoly({0: F(1, 2), 2: F(1, 2)})
    assert harmonic_pow(c1, 3) == HarmonicPoly({1: F(3, 4), 3: F(1, 4)})
    d = {1: 1, 3: 1}
    assert harmonic_pow(HarmonicPoly(d), 2) == _brute_square(d)
    with pytest.raises(ValueError):
        harmonic_pow(c1, 0)


def test_eps_labels():
    assert eps_label(F(-1, 2)) == "i/√2"
    assert eps_label(F(-1)) == "i"
    assert eps_label(F(1, 4)) == "1/2"
    assert eps_label(F(-1, 9)) == "i/3"
    assert eps_label(F(-3, 7)) == "i√(3/7)"


def test_text_is_deterministic():
    p = P("g5*w + 3*g3^2 - w^2 + 1")
    assert p.text() == P(p.text()).text()
    assert P(p.text()) == p


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ParamPoly(0)


@settings(max_examples=60, deadline=None)
@given(polys(), st.sampled_from([(2, 0), (5, 3), (7, 5), (3, 3), (9, 1)]), st.integers(0, 2))
def test_rf_cancel_idempotent_and_value_preserving(p, lq, k):
    h = h_factor(*lq)
    num = p * h ** k if p else h ** k
    x = FactoredRational(num, {lq: 2})
    y = rf_cancel(x)
    assert rf_cancel(y) == y
    # cross-multiplication: x * den(y) == y * den(x) via numerators
    assert x.numerator_poly() * y.denominator_poly() == y.numerator_poly() * x.denominator_poly()


@settings(max_examples=60, deadline=None)
@given(harmonics(), harmonics(), harmonics())
def test_cos_mul_commutative_associative(a, b, c):
    assert cos_mul(a, b) == cos_mul(b, a)
    assert cos_mul(cos_mul(a, b), c) == cos_mul(a, cos_mul(b, c))


@settings(max_examples=40, deadline=None)
@given(harmonics(odd=True), st.sampled_from([1, 3, 5]))
def test_odd_power_keeps_odd_harmonics(a, m):
    assert all(q % 2 for q in harmonic_pow(a, m).harmonics())
