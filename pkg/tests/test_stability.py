from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zstab.charge import ChargeSpec, Ordering, StabilityVector, central_charge, preset
from zstab.ring import BundleData, CGradedClass, GaussianRational, IntersectionRing, exp_class, integrate
from zstab.stability import (
    ChargeFamily,
    asym_compare,
    asym_stable,
    charge_density,
    comparison_polynomial,
    density_component,
    see_saw_check,
    subvariety_stable,
    subvariety_stable_asym,
    wall_scan,
)

G = GaussianRational
rats = st.fractions(min_value=-10, max_value=10, max_denominator=6)


def example(cp2, sigma, b, kind="dhym"):
    h = cp2.gen("h")
    tangent = [3 * h, 3 * h * h] if kind == "td" else None
    spec = preset(kind, cp2, h, b_field=b * h, tangent=tangent)
    e = BundleData.from_chern(cp2, 3, [None, sigma * h * h])
    f = BundleData.from_chern(cp2, 2, [None, sigma * h * h])
    return spec, e, f


def test_comparison_leading_term_symbolic(cp2, sym):
    R, sigma, b = sym
    spec, e, f = example(cp2, sigma, b)
    s = comparison_polynomial(central_charge(spec, f), central_charge(spec, e))
    assert s[1] == sigma * b * (3 - 2)
    assert all(c == 0 for i, c in enumerate(s) if i != 1)


def test_asym_compare_examples(cp2):
    spec, e, f = example(cp2, Fraction(2), Fraction(-1))
    v = asym_compare(central_charge(spec, f), central_charge(spec, e))
    assert v.ordering is Ordering.LESS
    assert v.witness_coefficient < 0
    z = central_charge(spec, e)
    same = asym_compare(z, z)
    assert same.ordering is Ordering.EQUAL and same.discrepancy_order is None
    spec, e, f = example(cp2, Fraction(1), Fraction(1), kind="td")
    assert asym_compare(central_charge(spec, f), central_charge(spec, e)).ordering is Ordering.GREATER
    with pytest.raises(ValueError):
        asym_compare(z, central_charge(spec, BundleData(cp2.zero())))


def test_asym_stable_examples(cp2):
    spec, e, f = example(cp2, Fraction(1), Fraction(-1))
    assert asym_stable(spec, e, [f]).aggregate == "Stable"
    assert asym_stable(spec, e, [e]).aggregate == "Semistable"
    spec0, e0, f0 = example(cp2, Fraction(0), Fraction(-1))
    rep = asym_stable(spec0, e0, [f0])
    assert rep.aggregate == "Semistable"
    assert rep.verdicts[0].discrepancy_order is None
    vac = asym_stable(spec, e, [])
    assert vac.aggregate == "Stable" and vac.vacuous
    assert asym_stable(spec, e, [BundleData(cp2.zero())]).aggregate == "Unstable"


def test_see_saw_examples(cp2):
    spec, e, f = example(cp2, Fraction(1), Fraction(-1))
    q = e - f
    assert q.ch == cp2.one()
    z_f, z_e, z_q = (central_charge(spec, x) for x in (f, e, q))
    rep = see_saw_check(z_f, z_e, z_q)
    assert rep["ok"] and rep["sub_vs_total"] == "Less" and rep["total_vs_quotient"] == "Less"
    zero = central_charge(spec, BundleData(cp2.zero()))
    degenerate = see_saw_check(z_e, z_e, zero)
    assert degenerate["branch"] == "zero_quotient" and degenerate["ok"]
    with pytest.raises(ValueError):
        see_saw_check(z_f, z_e, z_e)


def test_charge_density(cp2):
    spec, e, _ = example(cp2, Fraction(1), Fraction(0))
    dens = charge_density(spec, e)
    assert dens.integrate() == central_charge(spec, e).evaluate(1)
    h = cp2.gen("h")
    assert density_component(dens, 2) == CGradedClass(cp2.zero(), 3 * h)
    spec, e, _ = example(cp2, Fraction(1), Fraction(-2))
    dens = charge_density(spec, e)
    line = cp2.gen("h")
    paired = (density_component(dens, 2) * CGradedClass(line)).integrate()
    assert paired == central_charge(spec, e, over=line).evaluate(1)


def test_subvariety_stable(cp2):
    spec, e, _ = example(cp2, Fraction(1), Fraction(-1))
    assert subvariety_stable(spec, e, cp2.one())["verdict"] == "Boundary"
    surf = IntersectionRing(2, [("h", 2)], {"h^2": 1})
    h = surf.gen("h")
    spec = preset("dhym", surf, h)
    line_bundle = BundleData.from_chern(surf, 1, [3 * h])
    assert subvariety_stable(spec, line_bundle, h)["verdict"] == "Stable"
    assert subvariety_stable(spec, line_bundle, -h)["verdict"] == "Unstable"
    assert subvariety_stable_asym(spec, line_bundle, h)["verdict"] in ("Stable", "Unstable", "Boundary")


def test_wall_scans(cp2):
    for kind, wall in (("dhym", "0"), ("td", "3/4")):
        spec, e, f = example(cp2, Fraction(1), Fraction(0), kind=kind)
        fam = ChargeFamily(spec, "b_pencil", cp2.gen("h"))
        res = wall_scan(fam, e, [f])[0]
        assert [w["t"] for w in res["walls"]] == [wall]
        assert (res["walls"][0]["left"], res["walls"][0]["right"]) == ("Stable", "Unstable")


def test_rho_pencil_wall(cp2):
    h = cp2.gen("h")
    rho = StabilityVector([G(2, 0), G(0, -2), G(-1, 0)], mode="weak")
    spec = ChargeSpec(rho, h, exp_class(h))
    e = BundleData.from_chern(cp2, 3, [None, h * h])
    f = BundleData.from_chern(cp2, 2, [None, h * h])
    res = wall_scan(ChargeFamily(spec, "rho_pencil", G(0, 1), index=0), e, [f])[0]
    assert [w["t"] for w in res["walls"]] == ["0"]
    assert res["walls"][0]["left"] == "Stable"


def test_degenerate_family(cp2):
    spec, e, _ = example(cp2, Fraction(1), Fraction(0))
    res = wall_scan(ChargeFamily(spec, "b_pencil", cp2.gen("h")), e, [e])[0]
    assert res["walls"] == []


@given(st.fractions(min_value=-3, max_value=3, max_denominator=16))
def test_chamber_verdicts_match_compare(t):
    cp2 = IntersectionRing(2, [("h", 2)], {"h^2": 1})
    spec, e, f = example(cp2, Fraction(1), Fraction(0), kind="td")
    fam = ChargeFamily(spec, "b_pencil", cp2.gen("h"))
    res = wall_scan(fam, e, [f])[0]
    w = res["walls"][0]
    if t == Fraction(w["t"]):
        return
    expected = w["left"] if t < Fraction(w["t"]) else w["right"]
    spec_t = fam.at(t)
    v = asym_compare(central_charge(spec_t, f), central_charge(spec_t, e))
    assert {"Less": "Stable", "Greater": "Unstable"}[v.ordering.value] == expected


SURF = IntersectionRing(2, [("h", 2), ("e", 2)], {"h^2": 2, "h*e": 1, "e^2": -3})
rho_entries = st.tuples(*[st.tuples(rats, rats)] * 3)


def valid_spec(entries, u1, u2, u3):
    try:
        rho = StabilityVector([G(a, b) for a, b in entries], mode="strict")
    except ValueError:
        return None
    return ChargeSpec(rho, SURF.gen("h"), SURF.cls({"1": 1, "h": u1, "e": u2, "h^2": u3}))


def bundle(rank, a, b, c):
    return BundleData(SURF.cls({"1": rank, "h": a, "e": b, "h^2": c}))


specs = st.builds(valid_spec, rho_entries, rats, rats, rats).filter(lambda s: s is not None)
pos_bundles = st.builds(bundle, st.integers(1, 4), rats, rats, rats)


def deg_u(spec, e):
    return integrate(spec.omega * e.ch * spec.u)


@given(specs, pos_bundles, pos_bundles)
def test_slope_dominance(spec, e, f):
    mu_e, mu_f = deg_u(spec, e) / e.rank, deg_u(spec, f) / f.rank
    v = asym_compare(central_charge(spec, f), central_charge(spec, e))
    if mu_f != mu_e:
        assert v.discrepancy_order == 0
        assert v.ordering is (Ordering.LESS if mu_f < mu_e else Ordering.GREATER)
    elif v.ordering is not Ordering.EQUAL:
        assert v.discrepancy_order > 0
    if asym_stable(spec, e, [f]).aggregate == "Stable":
        assert mu_f <= mu_e


@given(specs, pos_bundles, pos_bundles)
def test_discrepancy_restatement(spec, e, f):
    z_f, z_e = central_charge(spec, f), central_charge(spec, e)
    s = comparison_polynomial(z_f, z_e)
    v = asym_compare(z_f, z_e)
    nonzero = [i for i, c in enumerate(s) if c != 0]
    if not nonzero:
        assert v.ordering is Ordering.EQUAL
        return
    top = max(nonzero)
    assert v.discrepancy_order == 2 + 2 - 1 - top
    assert (v.ordering is Ordering.LESS) == (s[top] < 0)


@given(specs, pos_bundles, pos_bundles)
def test_see_saw_random(spec, s, q):
    z_s, z_q = central_charge(spec, s), central_charge(spec, q)
    assert see_saw_check(z_s, z_s + z_q, z_q)["ok"]
