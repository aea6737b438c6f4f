"""Asymptotic Z-stability, see-saw checks, charge densities and wall scans.

Phases are compared through S(k) = Im(Z_F(k) * conj Z_E(k)).  Since
|Z_E(k)|^2 > 0 for large k, sign S = sign Im(Z_F/Z_E), so everything stays
inside polynomial arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from sympy.polys.rings import PolyElement, ring as poly_ring

from .charge import (
    ChargePolynomial,
    ChargeSpec,
    Ordering,
    StabilityVector,
    central_charge,
    leading,
    sign,
)
from .ring import BundleData, CGradedClass, GaussianRational, GradedClass, exp_class, is_zero, to_scalar

__all__ = [
    "StabilityVerdict",
    "comparison_polynomial",
    "asym_compare",
    "asym_slope_compare",
    "asym_stable",
    "StabilityReport",
    "see_saw_check",
    "charge_density",
    "density_component",
    "subvariety_stable",
    "subvariety_stable_asym",
    "ChargeFamily",
    "wall_scan",
    "fmt",
]


def fmt(x) -> str:
    """Stable string form of an exact scalar."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, PolyElement):
        return str(x.as_expr())
    return str(x)


@dataclass(frozen=True)
class StabilityVerdict:
    ordering: Ordering
    discrepancy_order: int | None
    witness_coefficient: object
    walls: tuple = ()

    def to_json(self) -> dict:
        return {
            "ordering": self.ordering.value,
            "discrepancy_order": self.discrepancy_order,
            "witness_coefficient": fmt(self.witness_coefficient),
            "walls": [dict(w) for w in self.walls],
        }


def comparison_polynomial(z_f: ChargePolynomial, z_e: ChargePolynomial) -> list:
    """Coefficients of S(k) = Im(Z_F(k) conj Z_E(k))."""
    f, e = z_f.coefficients, z_e.coefficients
    out = [Fraction(0)] * (len(f) + len(e) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(e):
            if b.is_zero():
                continue
            out[i + j] = out[i + j] + (a.im * b.re - a.re * b.im)
    return out


def asym_compare(z_f: ChargePolynomial, z_e: ChargePolynomial) -> StabilityVerdict:
    """Asymptotic phase comparison of F against E.

    Less iff the leading coefficient of S is negative.  The discrepancy order
    counts how many powers of k the leading term of S sits below
    k^(deg Z_F + deg Z_E - 1), the order at which distinct slopes show up.
    """
    if z_e.is_zero():
        raise ValueError("z_e must not be identically zero")
    s = comparison_polynomial(z_f, z_e)
    idx, c = leading(s)
    if idx is None:
        return StabilityVerdict(Ordering.EQUAL, None, Fraction(0))
    df = z_f.degree()
    de = z_e.degree()
    q = max(0, df + de - 1 - idx)
    return StabilityVerdict(Ordering.LESS if sign(c) < 0 else Ordering.GREATER, q, c)


def _asym_slope(z: ChargePolynomial):
    """('finite', sign of Im) or ('inf', +1 / -1) for the large-k Z-slope."""
    i_idx, i_lead = leading(z.imag())
    if i_idx is not None:
        return "finite", sign(i_lead)
    r_idx, r_lead = leading(z.real())
    if r_idx is None or sign(r_lead) < 0:
        return "inf", 1
    return "inf", -1


def asym_slope_compare(z_a: ChargePolynomial, z_b: ChargePolynomial) -> Ordering:
    """Compare mu_{Z_k}(A) with mu_{Z_k}(B) for k >> 0, infinities included."""
    ka, va = _asym_slope(z_a)
    kb, vb = _asym_slope(z_b)
    cmp = {-1: Ordering.LESS, 0: Ordering.EQUAL, 1: Ordering.GREATER}
    if ka == "inf" and kb == "inf":
        return cmp[(va > vb) - (va < vb)]
    if ka == "inf":
        return cmp[va]
    if kb == "inf":
        return cmp[-vb]
    _, lead = leading(comparison_polynomial(z_a, z_b))
    return cmp[sign(lead) * va * vb]


@dataclass
class StabilityReport:
    aggregate: str
    verdicts: list
    zero_charge: list
    worst: int | None
    vacuous: bool = False
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "aggregate": self.aggregate,
            "vacuous": self.vacuous,
            "worst_offender": self.worst,
            "warnings": list(self.warnings),
            "verdicts": [
                dict(v.to_json(), zero_charge=z) for v, z in zip(self.verdicts, self.zero_charge)
            ],
        }


def _verdict_label(v: StabilityVerdict, zero_f: bool) -> str:
    if zero_f or v.ordering is Ordering.GREATER:
        return "Unstable"
    if v.ordering is Ordering.EQUAL:
        return "Semistable"
    return "Stable"


def asym_stable(spec: ChargeSpec, e: BundleData, subobjects: list) -> StabilityReport:
    """Aggregate asymptotic Z-stability of E over user-supplied subobjects.

    Stable iff every verdict is Less; Greater or a vanishing Z(F) gives
    Unstable; otherwise Equal somewhere gives Semistable.
    """
    if not (isinstance(e.rank, Fraction) and e.rank > 0):
        raise ValueError("asym_stable needs rank E > 0")
    warnings = [spec.rho.warning] if spec.rho.warning else []
    if not subobjects:
        return StabilityReport("Stable", [], [], None, vacuous=True, warnings=warnings)
    z_e = central_charge(spec, e)
    verdicts, zeros = [], []
    for f in subobjects:
        z_f = central_charge(spec, f)
        verdicts.append(asym_compare(z_f, z_e))
        zeros.append(z_f.is_zero())
    labels = [_verdict_label(v, z) for v, z in zip(verdicts, zeros)]
    if "Unstable" in labels:
        aggregate = "Unstable"
        bad = [i for i, lab in enumerate(labels) if lab == "Unstable"]
        worst = min(bad, key=lambda i: (verdicts[i].discrepancy_order
                                        if verdicts[i].discrepancy_order is not None else -1))
    elif "Semistable" in labels:
        aggregate = "Semistable"
        worst = labels.index("Semistable")
    else:
        aggregate = "Stable"
        worst = None
    return StabilityReport(aggregate, verdicts, zeros, worst, warnings=warnings)


def see_saw_check(z_s: ChargePolynomial, z_e: ChargePolynomial, z_q: ChargePolynomial) -> dict:
    """Check the see-saw biconditionals for an additive triple S -> E -> Q.

    Returns a report whose ``ok`` flag is False on any violation.
    """
    if not (z_s + z_q == z_e):
        raise ValueError("triple is not additive: z_e != z_s + z_q")
    left = asym_slope_compare(z_s, z_e)
    right = asym_slope_compare(z_e, z_q)
    le = {Ordering.LESS, Ordering.EQUAL}
    ge = {Ordering.GREATER, Ordering.EQUAL}
    checks = {}
    if z_s.is_zero():
        branch = "zero_subobject"
        checks["subobject_above"] = left is Ordering.GREATER
        checks["quotient_equal"] = right is Ordering.EQUAL
    elif z_q.is_zero():
        branch = "zero_quotient"
        checks["subobject_equal"] = left is Ordering.EQUAL
        checks["quotient_above"] = right is Ordering.LESS
    else:
        branch = "generic"
        checks["le"] = (left in le) == (right in le)
        checks["ge"] = (left in ge) == (right in ge)
        checks["lt"] = (left is Ordering.LESS) == (right is Ordering.LESS)
        checks["gt"] = (left is Ordering.GREATER) == (right is Ordering.GREATER)
        checks["eq"] = (left is Ordering.EQUAL) == (right is Ordering.EQUAL)
    return {
        "branch": branch,
        "sub_vs_total": left.value,
        "total_vs_quotient": right.value,
        "checks": checks,
        "ok": all(checks.values()),
    }


def charge_density(spec: ChargeSpec, e: BundleData) -> CGradedClass:
    """The class (sum_d rho_d omega^d) Ch(E) U at k = 1."""
    ring = spec.ring
    weight = CGradedClass(ring.zero(), ring.zero())
    power = ring.one()
    for d in range(ring.n + 1):
        weight = weight + CGradedClass(power) * spec.rho[d]
        power = power * spec.omega
    return weight * (e.ch * spec.u)


def density_component(density: CGradedClass, deg: int) -> CGradedClass:
    """Component of real cohomological degree ``deg``."""
    return density.part(deg)


def subvariety_stable(spec: ChargeSpec, e: BundleData, v_class: GradedClass, at_k=1) -> dict:
    """Sign of Im(Z_V conj Z_X) at scale k: Stable if > 0, Unstable if < 0."""
    z_v = central_charge(spec, e, over=v_class).evaluate(at_k)
    z_x = central_charge(spec, e).evaluate(at_k)
    if z_x.is_zero():
        raise ValueError("Z_X(E) vanishes at this scale")
    value = (z_v * z_x.conj()).im
    s = sign(value)
    verdict = {1: "Stable", -1: "Unstable", 0: "Boundary"}[s]
    return {"verdict": verdict, "value": value, "z_v": z_v, "z_x": z_x}


def subvariety_stable_asym(spec: ChargeSpec, e: BundleData, v_class: GradedClass) -> dict:
    """Large-k variant: sign of the leading coefficient of Im(Z_V conj Z_X)."""
    z_v = central_charge(spec, e, over=v_class)
    z_x = central_charge(spec, e)
    idx, c = leading(comparison_polynomial(z_v, z_x))
    if idx is None:
        return {"verdict": "Boundary", "value": Fraction(0), "order": None}
    return {"verdict": "Stable" if sign(c) > 0 else "Unstable", "value": c, "order": idx}


# wall crossing

_T_RING, _T = poly_ring("t", sympy.QQ)


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(c.numerator), int(c.denominator))


def _eval_t(c, value: Fraction) -> Fraction:
    if isinstance(c, PolyElement):
        total = Fraction(0)
        for (k,), a in c.terms():
            total += _to_fraction(a) * value ** k
        return total
    return to_scalar(c)


@dataclass(frozen=True)
class ChargeFamily:
    """A one-parameter family of charges.

    kind ``b_pencil``: U(t) = exp(-t B0) U0 with ``direction`` = B0.
    kind ``rho_pencil``: rho_index(t) = rho_index + t * direction.
    """

    base: ChargeSpec
    kind: str
    direction: object
    index: int = 0
    parameter: str = "t"

    def __post_init__(self):
        if self.kind not in ("b_pencil", "rho_pencil"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "b_pencil":
            if not isinstance(self.direction, GradedClass) or not self.direction.is_homogeneous(2):
                raise ValueError("b_pencil direction must be a degree-2 class")
        else:
            if not 0 <= self.index <= self.base.rho.n:
                raise ValueError("rho_pencil index out of range")

    def symbolic(self) -> ChargeSpec:
        base = self.base
        if self.kind == "b_pencil":
            shift = self.direction.map_coeffs(lambda c: -(_T * c))
            return ChargeSpec(StabilityVector(base.rho.entries, mode="none"), base.omega,
                              exp_class(shift) * base.u)
        delta = GaussianRational.lift(self.direction)
        entries = list(base.rho.entries)
        r = entries[self.index]
        entries[self.index] = GaussianRational(r.re + _T * delta.re, r.im + _T * delta.im)
        return ChargeSpec(_SymbolicRho(entries), base.omega, base.u)

    def at(self, t, mode: str = "weak") -> ChargeSpec:
        t = to_scalar(t)
        base = self.base
        if self.kind == "b_pencil":
            return ChargeSpec(StabilityVector(base.rho.entries, mode=mode), base.omega,
                              exp_class(self.direction * (-t)) * base.u)
        entries = list(base.rho.entries)
        entries[self.index] = entries[self.index] + GaussianRational.lift(self.direction) * t
        return ChargeSpec(StabilityVector(entries, mode=mode), base.omega, base.u)


class _SymbolicRho(StabilityVector):
    """Stability vector with parameter-dependent entries (validated per sample)."""

    def __init__(self, entries):
        self.entries = tuple(entries)
        self.mode = "none"
        self.warning = None


def _roots_in_range(p: PolyElement, lo, hi) -> list:
    """Real roots of p(t) in the open interval (lo, hi): exact rationals or
    isolating intervals (a, b) with rational endpoints."""
    expr = p.as_expr()
    t = sympy.Symbol("t")
    poly = sympy.Poly(expr, t)
    out = []
    _, factors = poly.factor_list()
    for fac, _mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = Fraction(int((-b / a).p), int((-b / a).q))
            if (lo is None or r > lo) and (hi is None or r < hi):
                out.append(("exact", r))
        else:
            kw = {}
            if lo is not None:
                kw["inf"] = sympy.Rational(lo.numerator, lo.denominator)
            if hi is not None:
                kw["sup"] = sympy.Rational(hi.numerator, hi.denominator)
            for (a, b), _m in fac.intervals(**kw):
                a = Fraction(int(a.p), int(a.q))
                b = Fraction(int(b.p), int(b.q))
                if (lo is not None and b <= lo) or (hi is not None and a >= hi):
                    continue
                out.append(("interval", (a, b)))
    key = lambda r: r[1] if r[0] == "exact" else r[1][0]
    return sorted(set(out), key=key)


def _between(a, b) -> Fraction:
    if a is None and b is None:
        return Fraction(0)
    if a is None:
        return b - 1
    if b is None:
        return a + 1
    return (a + b) / 2


def _label_at(family: ChargeFamily, e: BundleData, f: BundleData, t: Fraction) -> str:
    spec = family.at(t, mode="none")
    z_e = central_charge(spec, e)
    z_f = central_charge(spec, f)
    return _verdict_label(asym_compare(z_f, z_e), z_f.is_zero())


def wall_scan(family: ChargeFamily, e: BundleData, subobjects: list, t_range=(None, None)) -> list:
    """Walls of asymptotic stability along a one-parameter family.

    For each subobject the top k-coefficient of S(k; t) that is not
    identically zero in t is a polynomial P(t); its real roots in the range
    are the walls.  Chambers are labelled by evaluating asym_compare at an
    interior rational sample.
    """
    lo, hi = (None if x is None else to_scalar(x) for x in t_range)
    sym = family.symbolic()
    z_e = central_charge(sym, e)
    results = []
    for f in subobjects:
        z_f = central_charge(sym, f)
        s = comparison_polynomial(z_f, z_e)
        top = None
        for i in range(len(s) - 1, -1, -1):
            if not is_zero(s[i]):
                top = i
                break
        if top is None:
            results.append({"walls": [], "constant_verdict": "Semistable",
                            "note": "no wall, constant verdict"})
            continue
        p = s[top]
        if not isinstance(p, PolyElement):
            p = _T_RING(p)
        roots = _roots_in_range(p, lo, hi)
        walls = []
        for i, r in enumerate(roots):
            if r[0] == "exact":
                left_edge = roots[i - 1] if i > 0 else None
                right_edge = roots[i + 1] if i + 1 < len(roots) else None
                left_pt = _edge(left_edge, lo, upper=True)
                right_pt = _edge(right_edge, hi, upper=False)
                rt = r[1]
                left = _label_at(family, e, f, _between(left_pt, rt))
                right = _label_at(family, e, f, _between(rt, right_pt))
                walls.append({"t": str(rt), "left": left, "right": right,
                              "at": _label_at(family, e, f, rt)})
            else:
                a, b = r[1]
                left_pt = _edge(roots[i - 1] if i > 0 else None, lo, upper=True)
                right_pt = _edge(roots[i + 1] if i + 1 < len(roots) else None, hi, upper=False)
                left = _label_at(family, e, f, _between(left_pt, a))
                right = _label_at(family, e, f, _between(b, right_pt))
                walls.append({"t": [str(a), str(b)], "left": left, "right": right})
        entry = {"walls": walls, "leading_order": top, "leading_coefficient": fmt(p)}
        if not walls:
            entry["constant_verdict"] = _label_at(family, e, f, _between(lo, hi))
        results.append(entry)
    return results


def _edge(root, bound, upper: bool):
    """Nearest usable rational edge of a chamber next to ``root``."""
    if root is None:
        return bound
    if root[0] == "exact":
        return root[1]
    a, b = root[1]
    return b if upper else a
