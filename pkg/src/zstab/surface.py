"""Z-critical surface reduction a*alpha^2 + alpha*beta + gamma = 0 in the
omega-proportional numerical regime.

All forms are constant multiples of powers of omega, so the volume
hypothesis (positivity of beta^2/4 - a*gamma) becomes a rational inequality.
This is a cohomological surrogate for the pointwise condition on forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charge import ChargeSpec, StabilityVector
from .ring import BundleData, GradedClass, integrate
from .stability import fmt, subvariety_stable

__all__ = [
    "ProportionalData",
    "SurfaceReduction",
    "proportional_data",
    "surface_coefficients",
    "coefficients_from_numbers",
    "volume_hypothesis",
    "surface_report",
]


@dataclass(frozen=True)
class ProportionalData:
    """V = [omega]^2 and the ratios U_2 = u2*omega, U_4 = u4*omega^2, alpha = al*omega."""

    volume: Fraction
    u2: Fraction
    u4: Fraction
    al: Fraction


@dataclass(frozen=True)
class SurfaceReduction:
    a: Fraction
    beta_coeff: Fraction
    gamma_coeff: Fraction

    @property
    def discriminant(self) -> Fraction:
        return self.beta_coeff ** 2 / 4 - self.a * self.gamma_coeff

    def to_json(self) -> dict:
        return {"a": fmt(self.a), "beta": fmt(self.beta_coeff), "gamma": fmt(self.gamma_coeff),
                "discriminant": fmt(self.discriminant)}


def _numerically_proportional(cls: GradedClass, omega: GradedClass, ratio) -> bool:
    """cls - ratio*omega pairs to zero with every degree-2 monomial."""
    diff = cls - omega * ratio
    ring = cls.ring
    for mono in ring.monomials_of_degree(2):
        probe = GradedClass(ring, {mono: Fraction(1)})
        if integrate(diff * probe) != 0:
            return False
    return True


def proportional_data(spec: ChargeSpec, l: BundleData) -> ProportionalData:
    ring = spec.ring
    if ring.n != 2:
        raise ValueError("surface reduction needs a surface (n = 2)")
    if l.rank != 1:
        raise ValueError("surface reduction needs a line bundle")
    omega = spec.omega
    volume = integrate(omega * omega)
    if volume == 0:
        raise ValueError("[omega]^2 must be nonzero")
    u2cls = spec.u.part(2)
    alpha = l.c1()
    u2 = integrate(u2cls * omega) / volume
    al = integrate(alpha * omega) / volume
    u4 = integrate(spec.u.part(4)) / volume
    for name, cls, r in (("U_2", u2cls, u2), ("c_1(L)", alpha, al)):
        if not _numerically_proportional(cls, omega, r):
            raise ValueError(f"{name} is not numerically proportional to omega")
    return ProportionalData(volume, u2, u4, al)


def _rho_combos(rho: StabilityVector):
    r0, r1, r2 = rho[0], rho[1], rho[2]
    x1 = r2.re * r1.im - r2.im * r1.re
    x2 = r2.im * r0.re - r2.re * r0.im
    x3 = r0.re * r1.im - r0.im * r1.re
    return x1, x2, x3


def coefficients_from_numbers(rho: StabilityVector, data: ProportionalData) -> SurfaceReduction:
    x1, x2, x3 = _rho_combos(rho)
    V, u2, u4, al = data.volume, data.u2, data.u4, data.al
    deg_l = al * V
    w_u2 = u2 * V
    big_u4 = u4 * V
    t = big_u4 + al * u2 * V + al * al * V / 2
    d = deg_l + w_u2
    a = -x2 * V / 2 - x3 * d / 2
    beta = x1 * V - x2 * V * u2 + x3 * (t - d * u2)
    gamma = x1 * (V * u2 - d) + x2 * (t - V * u4) + x3 * (t * u2 - d * u4)
    return SurfaceReduction(a, beta, gamma)


def surface_coefficients(spec: ChargeSpec, l: BundleData) -> SurfaceReduction:
    """a, beta, gamma (as multiples of 1, omega, omega^2) for a line bundle L."""
    return coefficients_from_numbers(spec.rho, proportional_data(spec, l))


def volume_hypothesis(red: SurfaceReduction) -> str:
    if red.a == 0:
        return "Fails_a_zero"
    if red.discriminant > 0:
        return "Holds"
    return "Fails_positivity"


def surface_report(spec: ChargeSpec, l: BundleData, curves: list | None = None, at_k=1) -> dict:
    """Volume hypothesis plus subvariety stability over user-supplied curve classes."""
    red = surface_coefficients(spec, l)
    out = red.to_json()
    out["verdict"] = volume_hypothesis(red)
    verdicts = []
    for name, cls in curves or []:
        r = subvariety_stable(spec, l, cls, at_k=at_k)
        verdicts.append({"curve": name, "verdict": r["verdict"], "value": fmt(r["value"])})
    out["curve_verdicts"] = verdicts
    return out
