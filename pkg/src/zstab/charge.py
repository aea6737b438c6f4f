"""Polynomial central charges, Z-slopes and Hilbert polynomials."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .ring import (
    BundleData,
    GaussianRational,
    GradedClass,
    IntersectionRing,
    char_class,
    exp_class,
    integrate,
    is_zero,
    series_sqrt,
    to_scalar,
)

__all__ = [
    "Ordering",
    "StabilityVector",
    "ChargeSpec",
    "ChargePolynomial",
    "preset_rho",
    "preset",
    "central_charge",
    "slope_phase",
    "PhaseData",
    "hilbert_polynomial",
    "gieseker_compare",
    "leading",
    "sign",
]


class Ordering(str, enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


def sign(x) -> int:
    """Sign of a rational; raises for symbolic values."""
    if not isinstance(x, (int, Fraction)):
        raise TypeError(f"sign of a non-rational value {x!r} is undetermined")
    return (x > 0) - (x < 0)


def leading(coeffs: list):
    """(index, coefficient) of the highest nonzero entry, or (None, 0)."""
    for i in range(len(coeffs) - 1, -1, -1):
        if not is_zero(coeffs[i]):
            return i, coeffs[i]
    return None, Fraction(0)


class StabilityVector:
    """rho_0, ..., rho_n with strict, weak or no validation.

    strict: Im rho_n > 0 and Im(rho_d / rho_{d+1}) > 0 for all d.
    weak: only Im(rho_{n-1} / rho_n) > 0; ``warning`` is set.
    """

    def __init__(self, entries, mode: str = "strict"):
        self.entries = tuple(GaussianRational.lift(e) if not isinstance(e, (tuple, list))
                             else GaussianRational(*e) for e in entries)
        if len(self.entries) < 2:
            raise ValueError("a stability vector needs at least rho_0 and rho_1")
        if mode not in ("strict", "weak", "none"):
            raise ValueError(f"unknown validation mode {mode!r}")
        self.mode = mode
        self.warning = None
        for d, r in enumerate(self.entries):
            if r.is_zero():
                raise ValueError(f"rho_{d} must be nonzero")
        n = self.n
        if mode == "strict":
            if not self.entries[n].im > 0:
                raise ValueError(f"strict validation: Im rho_{n} must be > 0")
            for d in range(n):
                if not (self.entries[d] / self.entries[d + 1]).im > 0:
                    raise ValueError(f"strict validation: Im(rho_{d}/rho_{d + 1}) must be > 0")
        elif mode == "weak":
            if not (self.entries[n - 1] / self.entries[n]).im > 0:
                raise ValueError(f"weak validation: Im(rho_{n - 1}/rho_{n}) must be > 0")
            self.warning = "weakly validated stability vector (only the leading inequality checked)"

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, d):
        return self.entries[d]

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"StabilityVector({list(self.entries)}, mode={self.mode!r})"


@dataclass(frozen=True)
class ChargeSpec:
    rho: StabilityVector
    omega: GradedClass
    u: GradedClass

    def __post_init__(self):
        if self.rho.n != self.omega.ring.n:
            raise ValueError("stability vector length must be n + 1")
        if not self.omega.is_homogeneous(2) or self.omega.is_zero():
            raise ValueError("omega must be a nonzero class of pure degree 2")
        self.omega._check(self.u)
        if not is_zero(self.u.constant() - 1):
            raise ValueError("U must be unipotent (degree-0 part 1)")

    @property
    def ring(self) -> IntersectionRing:
        return self.omega.ring


class ChargePolynomial:
    """Z(k) = sum_d coefficients[d] * k^d with Gaussian-rational coefficients."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        self.coefficients = tuple(GaussianRational.lift(c) for c in coefficients)

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    def real(self) -> list:
        return [c.re for c in self.coefficients]

    def imag(self) -> list:
        return [c.im for c in self.coefficients]

    def degree(self):
        for i in range(len(self.coefficients) - 1, -1, -1):
            if not self.coefficients[i].is_zero():
                return i
        return None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def evaluate(self, k) -> GaussianRational:
        k = to_scalar(k)
        out = GaussianRational(0, 0)
        for c in reversed(self.coefficients):
            out = out * k + c
        return out

    def _pad(self, other):
        m = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [GaussianRational(0, 0)] * (m - len(self.coefficients))
        b = list(other.coefficients) + [GaussianRational(0, 0)] * (m - len(other.coefficients))
        return a, b

    def __add__(self, other):
        a, b = self._pad(other)
        return ChargePolynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        a, b = self._pad(other)
        return ChargePolynomial([x - y for x, y in zip(a, b)])

    def __neg__(self):
        return ChargePolynomial([-c for c in self.coefficients])

    def scale(self, c) -> "ChargePolynomial":
        return ChargePolynomial([x * c for x in self.coefficients])

    def __eq__(self, other):
        if not isinstance(other, ChargePolynomial):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def map(self, f) -> "ChargePolynomial":
        return ChargePolynomial([GaussianRational(f(c.re), f(c.im)) for c in self.coefficients])

    def __repr__(self):
        return f"ChargePolynomial({list(self.coefficients)})"


def preset_rho(n: int, mode: str = "weak") -> StabilityVector:
    """rho_d = -(-i)^d / d!, the sign convention of the dHYM / Td charges."""
    minus_i = GaussianRational(0, -1)
    return StabilityVector([-(minus_i ** d) * Fraction(1, factorial(d)) for d in range(n + 1)],
                           mode=mode)


def preset(name: str, ring: IntersectionRing, omega: GradedClass, b_field: GradedClass | None = None,
           tangent: list | None = None, mode: str = "weak") -> ChargeSpec:
    """Built-in charges ``dhym``, ``td`` and ``ahat``.

    U is e^{-B}, e^{-B} sqrt(Td X) or e^{-B} sqrt(A-hat X).  Weak validation is
    the default since Im rho_n vanishes for even n.
    """
    b_field = b_field if b_field is not None else ring.zero()
    u = exp_class(-b_field)
    if name == "dhym":
        pass
    elif name in ("td", "ahat"):
        if tangent is None:
            raise ValueError(f"preset {name!r} needs tangent Chern data")
        kind = "todd" if name == "td" else "a_hat"
        u = u * series_sqrt(char_class(kind, ring.n, tangent, ring=ring))
    else:
        raise ValueError(f"unknown charge preset {name!r}")
    return ChargeSpec(preset_rho(ring.n, mode), omega, u)


def central_charge(spec: ChargeSpec, e: BundleData, over: GradedClass | None = None) -> ChargePolynomial:
    """Z(k) = sum_d rho_d k^d integrate(omega^d Ch(E) U over)."""
    ring = spec.ring
    spec.omega._check(e.ch)
    if over is None:
        over = ring.one()
    else:
        spec.omega._check(over)
        degs = over.degrees_present()
        if len(degs) > 1:
            raise ValueError("`over` must have pure degree")
        if degs and degs[0] % 2:
            raise ValueError("`over` must have even degree")
    base = e.ch * spec.u * over
    coeffs = []
    power = ring.one()
    for d in range(ring.n + 1):
        coeffs.append(spec.rho[d] * integrate(power * base))
        power = power * spec.omega
    return ChargePolynomial(coeffs)


@dataclass(frozen=True)
class PhaseData:
    """Exact phase information: value of Z, quadrant label, half-plane flags."""

    value: GaussianRational
    quadrant: str
    upper_half_plane: bool


def _quadrant(z: GaussianRational) -> str:
    re, im = sign(z.re), sign(z.im)
    if re == 0 and im == 0:
        return "origin"
    if im == 0:
        return "positive_real_axis" if re > 0 else "negative_real_axis"
    if re == 0:
        return "positive_imaginary_axis" if im > 0 else "negative_imaginary_axis"
    return {(1, 1): "I", (-1, 1): "II", (-1, -1): "III", (1, -1): "IV"}[(re, im)]


def slope_phase(z: ChargePolynomial, at_k):
    """Z-slope -Re/Im at k = at_k (with the +-infinity conventions) and phase data.

    Z = 0 gets slope +inf (phase pi by convention); its quadrant label is
    ``origin``.
    """
    at_k = to_scalar(at_k)
    if not at_k > 0:
        raise ValueError("at_k must be positive")
    val = z.evaluate(at_k)
    if val.im != 0:
        slope = -val.re / val.im
    elif val.re < 0 or val.re == 0:
        slope = math.inf
    else:
        slope = -math.inf
    upper = val.im > 0 or (val.im == 0 and val.re <= 0)
    return slope, PhaseData(val, _quadrant(val), upper)


def _coerce_tangent(ring, tangent):
    if tangent is None:
        raise ValueError("tangent Chern data is required")
    if isinstance(tangent, GradedClass):
        return tangent
    return char_class("todd", ring.n, list(tangent), ring=ring)


def hilbert_polynomial(e: BundleData, l: GradedClass, tangent) -> list:
    """chi(E (x) L^k) as coefficients in k.  ``tangent`` is [c1, c2, ...] of TX or Td(X)."""
    ring = e.ring
    e.ch._check(l)
    if not l.is_homogeneous(2):
        raise ValueError("l must be a degree-2 class")
    td = _coerce_tangent(ring, tangent)
    base = e.ch * td
    out = []
    power = ring.one()
    for j in range(ring.n + 1):
        out.append(integrate(power * base) / factorial(j))
        power = power * l
    return out


def gieseker_compare(f: BundleData, e: BundleData, l: GradedClass, tangent):
    """Compare reduced Hilbert polynomials P_F/rk F and P_E/rk E for k >> 0.

    Returns (Ordering, order) where order is the power of k of the leading
    nonzero coefficient of the difference (None when Equal).
    """
    if is_zero(f.rank) or is_zero(e.rank):
        raise ValueError("Gieseker comparison needs positive ranks")
    pf = hilbert_polynomial(f, l, tangent)
    pe = hilbert_polynomial(e, l, tangent)
    diff = [a / f.rank - b / e.rank for a, b in zip(pf, pe)]
    idx, c = leading(diff)
    if idx is None:
        return Ordering.EQUAL, None
    return (Ordering.LESS if sign(c) < 0 else Ordering.GREATER), idx
