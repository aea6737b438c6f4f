from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zstab.charge import preset
from zstab.grr import (
    EmbeddedSubmanifold,
    cy_anomaly_check,
    cy_divisor_discrepancy,
    divisor_coefficient,
    pushforward_ch_structure_sheaf,
    todd_inverse_normal,
)
from zstab.ring import BundleData, IntersectionRing, exp_class, integrate

K3 = IntersectionRing(2, [("h", 2)], {"h^2": 2})
QUINTIC = IntersectionRing(3, [("H", 2)], {"H^3": 5})


def test_rational_curve_correction():
    c = EmbeddedSubmanifold(K3, 1, {"h": 1}, genus=0)
    f = pushforward_ch_structure_sheaf(c)
    assert f.correction == 1
    assert f(K3.one()) == 1
    assert f(K3.gen("h")) == 1


def test_correction_cancels_when_canonicals_match():
    # fibre of P1 x P1: K_C and K_X|_C both have degree -2
    p1p1 = IntersectionRing(2, [("a", 2), ("b", 2)], {"a^2": 0, "a*b": 1, "b^2": 0})
    c = EmbeddedSubmanifold(p1p1, 1, {"a": 0, "b": 1}, deg_KX_restricted=-2, genus=0)
    assert pushforward_ch_structure_sheaf(c).correction == 0


def test_todd_inverse_normal_formula():
    cp2 = IntersectionRing(2, [("h", 2)], {"h^2": 1})
    c = EmbeddedSubmanifold(cp2, 1, {"h": 2}, deg_KX_restricted=-6, genus=0)
    k, kx = c.canonical(), c.ambient_canonical()
    assert todd_inverse_normal(c) == c.ring.one() - k / 2 + kx / 2
    assert integrate(pushforward_ch_structure_sheaf(c).density.part(2)) == -(-2 + 6) / 2


def test_anomaly_examples():
    c = EmbeddedSubmanifold(K3, 1, {"h": 2}, genus=1)
    rep = cy_anomaly_check(BundleData(K3.one()), c, "cy_surface")
    assert rep["equal"] and rep["lhs"] == rep["rhs"]
    line = EmbeddedSubmanifold(QUINTIC, 1, {"H": 1}, genus=0)
    assert cy_anomaly_check(BundleData(QUINTIC.scalar(2)), line, "cy_threefold_curve")["equal"]


def test_anomaly_rejects_bad_input():
    c = EmbeddedSubmanifold(K3, 1, {"h": 2}, genus=1)
    with pytest.raises(ValueError):
        cy_anomaly_check(BundleData(K3.one()), c, "cy_fourfold")
    with pytest.raises(ValueError):
        cy_anomaly_check(BundleData(K3.one()), c, "cy_threefold_curve")
    bad = EmbeddedSubmanifold(K3, 1, {"h": 2}, deg_KX_restricted=1, genus=1)
    with pytest.raises(ValueError):
        cy_anomaly_check(BundleData(K3.one()), bad, "cy_surface")
    with pytest.raises(ValueError):
        EmbeddedSubmanifold(K3, 1, {"h": 2}, deg_KC=-3)


def test_divisor_coefficient():
    assert divisor_coefficient() == Fraction(1, 8) + Fraction(1, 6) - Fraction(1, 4) == Fraction(1, 24)


@pytest.mark.parametrize("k2,expected", [(0, 0), (48, 2), (5, Fraction(5, 24))])
def test_divisor_discrepancy(k2, expected):
    d = EmbeddedSubmanifold(QUINTIC, 2, {"H^2": 5, "H*K": 5, "K^2": k2})
    rep = cy_divisor_discrepancy(d)
    assert rep["universal_coefficient"] == Fraction(1, 24)
    assert rep["k_squared"] == k2
    assert rep["discrepancy"] == expected


def test_divisor_mismatch_with_bundle():
    d = EmbeddedSubmanifold(QUINTIC, 2, {"H^2": 5, "H*K": 5, "K^2": 48})
    spec = preset("dhym", QUINTIC, QUINTIC.gen("H"))
    rep = cy_divisor_discrepancy(d, spec, BundleData(QUINTIC.scalar(2)))
    # rho_0 * rank * discrepancy with rho_0 = -1
    assert rep["mismatch"].re == -4 and rep["mismatch"].im == 0


def test_class_cross_check():
    c = EmbeddedSubmanifold(K3, 1, {"h": 2}, genus=2, klass=K3.gen("h"))
    assert c.check_class()
    wrong = EmbeddedSubmanifold(K3, 1, {"h": 3}, genus=2, klass=K3.gen("h"))
    assert not wrong.check_class()


@given(st.integers(0, 4), st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 5),
       st.fractions(-5, 5, max_denominator=4))
def test_anomaly_sweep(rank, c1, deg, genus, ch2):
    e = BundleData(K3.cls({"1": rank, "h": c1, "h^2": ch2}))
    c = EmbeddedSubmanifold(K3, 1, {"h": deg}, genus=genus)
    assert cy_anomaly_check(e, c, "cy_surface")["equal"]
    e3 = BundleData(QUINTIC.cls({"1": rank, "H": c1, "H^2": ch2}))
    c3 = EmbeddedSubmanifold(QUINTIC, 1, {"H": deg}, genus=genus)
    assert cy_anomaly_check(e3, c3, "cy_threefold_curve")["equal"]


@given(st.integers(0, 6))
def test_curve_todd_inverse_matches_half_canonical(genus):
    c = EmbeddedSubmanifold(K3, 1, {"h": 1}, genus=genus)
    assert todd_inverse_normal(c, cy=True) * exp_class(c.canonical() / 2) == c.ring.one()


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-100, 100))
def test_divisor_fails_by_k_squared_over_24(hk, h2, k2):
    d = EmbeddedSubmanifold(QUINTIC, 2, {"H^2": h2, "H*K": hk, "K^2": k2})
    prod = todd_inverse_normal(d, cy=True) * exp_class(d.canonical() / 2)
    assert prod.part(0) == d.ring.one()
    assert prod.part(2).is_zero()
    assert integrate(prod) == Fraction(k2, 24)
