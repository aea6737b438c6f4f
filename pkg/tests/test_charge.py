import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from zstab.charge import (
    ChargeSpec,
    ChargePolynomial,
    Ordering,
    StabilityVector,
    central_charge,
    gieseker_compare,
    hilbert_polynomial,
    preset,
    slope_phase,
)
from zstab.ring import BundleData, GaussianRational, IntersectionRing, char_class

G = GaussianRational
rats = st.fractions(min_value=-10, max_value=10, max_denominator=6)


def cp2_pair(cp2, sigma):
    h = cp2.gen("h")
    e = BundleData.from_chern(cp2, 3, [None, sigma * h * h])
    f = BundleData.from_chern(cp2, 2, [None, sigma * h * h])
    return e, f


def test_dhym_charge_symbolic(cp2, sym):
    R, sigma, b = sym
    h = cp2.gen("h")
    spec = preset("dhym", cp2, h, b_field=b * h)
    e, _ = cp2_pair(cp2, sigma)
    z = central_charge(spec, e)
    assert z.coefficients[0] == G(sigma - Fraction(3, 2) * b ** 2, 0)
    assert z.coefficients[1] == G(0, -3 * b)
    assert z.coefficients[2] == G(Fraction(3, 2), 0)


def test_zero_sheaf(cp2):
    spec = preset("dhym", cp2, cp2.gen("h"))
    assert central_charge(spec, BundleData(cp2.zero())).is_zero()


def test_td_charge_of_structure_sheaf(cp2):
    h = cp2.gen("h")
    spec = preset("td", cp2, h, tangent=[3 * h, 3 * h * h])
    z = central_charge(spec, BundleData(cp2.one()))
    # independent oracle: -(coefficient of x^2) in exp(-i k x) sqrt(1 + 3x/2 + x^2)
    k, x = sympy.symbols("k x")
    series = sympy.series(sympy.exp(-sympy.I * k * x) * sympy.sqrt(1 + sympy.Rational(3, 2) * x + x ** 2), x, 0, 3)
    expected = sympy.expand(-series.removeO().coeff(x, 2))
    got = sum((sympy.Rational(c.re.numerator, c.re.denominator)
               + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)) * k ** d
              for d, c in enumerate(z.coefficients))
    assert sympy.expand(got - expected) == 0
    assert list(z.coefficients) == [G("-7/32", 0), G(0, "3/4"), G("1/2", 0)]


def test_over_validation(cp2):
    spec = preset("dhym", cp2, cp2.gen("h"))
    e = BundleData(cp2.one())
    assert central_charge(spec, e, over=cp2.one()) == central_charge(spec, e)
    other = IntersectionRing(2, [("h", 2)], {"h^2": 2})
    with pytest.raises(ValueError):
        central_charge(spec, e, over=other.one())


def test_slope_phase_examples(cp2):
    assert slope_phase(ChargePolynomial([G(0, 1)]), 1)[0] == 0
    assert slope_phase(ChargePolynomial([G(-1, 0)]), 1)[0] == math.inf
    assert slope_phase(ChargePolynomial([G(0, 0)]), 1)[1].quadrant == "origin"
    h = cp2.gen("h")
    spec = preset("dhym", cp2, h, b_field=-h)
    e, _ = cp2_pair(cp2, Fraction(1))
    slope, phase = slope_phase(central_charge(spec, e), 1)
    assert phase.value == G(1, 3)
    assert slope == Fraction(-1, 3)
    with pytest.raises(ValueError):
        slope_phase(ChargePolynomial([G(1, 0)]), 0)


def test_stability_vector_validation():
    with pytest.raises(ValueError):
        StabilityVector([G(1, 0), G(0, 0), G(0, 1)])
    with pytest.raises(ValueError):
        StabilityVector([G(1, 0), G(0, 1), G(-1, 0)], mode="strict")
    weak = StabilityVector([G(-1, 0), G(0, 1), G("1/2", 0)], mode="weak")
    assert weak.warning


def test_hilbert_polynomial_examples(cp2):
    h = cp2.gen("h")
    tangent = [3 * h, 3 * h * h]
    o = BundleData(cp2.one())
    assert hilbert_polynomial(o, h, tangent) == [1, Fraction(3, 2), Fraction(1, 2)]
    assert hilbert_polynomial(BundleData(cp2.scalar(4)), h, tangent) == [4, 6, 2]
    e, _ = cp2_pair(cp2, Fraction(5))
    assert hilbert_polynomial(e, h, tangent) == [3 - 5, Fraction(9, 2), Fraction(3, 2)]
    with pytest.raises(ValueError):
        hilbert_polynomial(o, h, None)


def test_gieseker_examples(cp2):
    h = cp2.gen("h")
    tangent = [3 * h, 3 * h * h]
    e, f = cp2_pair(cp2, Fraction(2))
    assert gieseker_compare(e, e, h, tangent) == (Ordering.EQUAL, None)
    assert gieseker_compare(f, e, h, tangent) == (Ordering.LESS, 0)
    big = BundleData.from_chern(cp2, 1, [h])
    assert gieseker_compare(big, e, h, tangent) == (Ordering.GREATER, 1)


SURF = IntersectionRing(2, [("h", 2), ("e", 2)], {"h^2": 3, "h*e": 1, "e^2": -2})
STRICT = ChargeSpec(StabilityVector([G(-1, 1), G(0, 1), G(1, 1)]), SURF.gen("h"),
                  SURF.cls({"1": 1, "h": "1/3", "e": -1, "h^2": "2/7"}))


def bundle(rank, a, b, c):
    return BundleData(SURF.cls({"1": rank, "h": a, "e": b, "h^2": c}))


bundles = st.builds(bundle, st.integers(0, 4), rats, rats, rats)


@given(bundles, bundles)
def test_additivity(s, q):
    e = BundleData(s.ch + q.ch)
    assert central_charge(STRICT, s) + central_charge(STRICT, q) == central_charge(STRICT, e)


@given(st.integers(1, 5), rats, rats, rats)
def test_leading_coefficient(rank, a, b, c):
    z = central_charge(STRICT, bundle(rank, a, b, c))
    lead = z.coefficients[2]
    assert lead == STRICT.rho[2] * (3 * rank)
    assert lead.im > 0


@given(bundles)
def test_over_fundamental_class(e):
    assert central_charge(STRICT, e, over=SURF.one()) == central_charge(STRICT, e)


@given(st.integers(1, 4), st.integers(1, 4), rats, rats, rats, rats)
def test_gieseker_follows_slope(rf, re_, af, ae, cf, ce):
    h = SURF.gen("h")
    f, e = bundle(rf, af, 0, cf), bundle(re_, ae, 0, ce)
    td = char_class("todd", 2, [h, SURF.cls({"h^2": 1})], ring=SURF)
    mu_f, mu_e = Fraction(af) / rf, Fraction(ae) / re_
    if mu_f == mu_e:
        return
    order, idx = gieseker_compare(f, e, h, td)
    assert idx == 1
    assert order == (Ordering.LESS if mu_f < mu_e else Ordering.GREATER)
