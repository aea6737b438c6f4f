"""Riemann-Roch pushforwards for embedded curves and divisors, and the
half-canonical anomaly identities on Calabi-Yau ambients.

A submanifold carries its own intersection ring whose generators are the
restricted ambient generators plus ``K`` (its canonical class) and ``KX``
(the restricted ambient canonical class).  Pushforwards are pairing
functionals: integrals over the submanifold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charge import ChargeSpec, preset
from .ring import (
    BundleData,
    GaussianRational,
    GradedClass,
    IntersectionRing,
    char_class,
    exp_class,
    integrate,
    series_inverse,
    to_scalar,
)

__all__ = [
    "EmbeddedSubmanifold",
    "pushforward_ch_structure_sheaf",
    "todd_inverse_normal",
    "cy_anomaly_check",
    "cy_divisor_discrepancy",
    "divisor_coefficient",
]


class EmbeddedSubmanifold:
    """A curve (dim 1) or surface (dim 2) inside an ambient intersection ring.

    ``restriction_degrees`` maps ambient monomials of degree 2*dim (strings
    like "h" or "h^2", and for surfaces also "h*K", "K^2") to their integrals
    over the submanifold.
    """

    def __init__(self, ambient: IntersectionRing, dim: int, restriction_degrees: dict,
                 deg_KX_restricted=0, deg_KC=None, genus=None, klass: GradedClass | None = None):
        if dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if dim >= ambient.n:
            raise ValueError("submanifold dimension must be below the ambient dimension")
        self.ambient = ambient
        self.dim = dim
        self.genus = genus
        self.deg_KX_restricted = to_scalar(deg_KX_restricted)
        if dim == 1:
            if deg_KC is None:
                if genus is None:
                    raise ValueError("a curve needs deg_KC or genus")
                deg_KC = 2 * genus - 2
            deg_KC = to_scalar(deg_KC)
            if deg_KC.denominator != 1 or deg_KC % 2 or deg_KC < -2:
                raise ValueError("deg K_C must be an even integer >= -2")
        self.deg_KC = None if deg_KC is None else to_scalar(deg_KC)
        if klass is not None:
            if not klass.is_homogeneous(2 * (ambient.n - dim)):
                raise ValueError(f"class must have degree {2 * (ambient.n - dim)}")
        self.klass = klass
        self.amb_gens = [(name, d) for name, d in ambient.generators if d <= 2 * dim]
        gens = self.amb_gens + [("K", 2), ("KX", 2)]
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("ambient generators may not be named K or KX")
        tmp = IntersectionRing.__new__(IntersectionRing)
        tmp.n, tmp.generators, tmp.names = dim, tuple(gens), tuple(names)
        tmp.degrees = tuple(g[1] for g in gens)
        table = {}
        given = {}
        for key, val in dict(restriction_degrees).items():
            given[tmp.monomial(key)] = to_scalar(val)
        kx = names.index("KX")
        k = names.index("K")
        for mono in tmp.monomials_of_degree(2 * dim):
            if mono in given:
                table[mono] = given[mono]
            elif mono[kx] > 0:
                if dim == 1:
                    table[mono] = self.deg_KX_restricted
                elif self.deg_KX_restricted == 0:
                    table[mono] = Fraction(0)
            elif dim == 1 and mono[k] == 1:
                table[mono] = self.deg_KC
        if dim == 2 and self.deg_KX_restricted != 0:
            raise ValueError("surfaces are only supported in ambients with K_X = 0")
        self.ring = IntersectionRing(dim, gens, table)

    @property
    def codim(self) -> int:
        return self.ambient.n - self.dim

    def restrict(self, a: GradedClass) -> GradedClass:
        """Pull back an ambient class (generators of degree > 2*dim restrict to 0)."""
        if a.ring != self.ambient:
            raise ValueError("class is not in the ambient ring")
        keep = [self.ambient.names.index(name) for name, _ in self.amb_gens]
        out = {}
        for mono, c in a.coeffs.items():
            if any(e and i not in keep for i, e in enumerate(mono)):
                continue
            sub = tuple(mono[i] for i in keep) + (0, 0)
            out[sub] = out.get(sub, 0) + c
        return GradedClass(self.ring, out)

    def canonical(self) -> GradedClass:
        return self.ring.gen("K")

    def ambient_canonical(self) -> GradedClass:
        return self.ring.gen("KX")

    def integrate_over(self, a: GradedClass) -> Fraction:
        """Integral over the submanifold of an ambient class."""
        return integrate(self.restrict(a))

    def check_class(self) -> bool:
        """Cross-check: integrate(lambda * [S]) on X equals the integral over S."""
        if self.klass is None:
            return True
        top = 2 * self.dim
        for mono in self.ambient.monomials_of_degree(top):
            probe = GradedClass(self.ambient, {mono: Fraction(1)})
            if integrate(probe * self.klass) != self.integrate_over(probe):
                return False
        return True


def todd_inverse_normal(c: EmbeddedSubmanifold, cy: bool = False) -> GradedClass:
    """Td(N)^{-1} from the Todd class of N with c_1(N) = K - KX (higher c_i do not reach).

    ``cy`` sets KX = 0 as a class, not only numerically.
    """
    ring = c.ring
    c1 = c.canonical() if cy else c.canonical() - c.ambient_canonical()
    td = char_class("todd", c.codim, [c1], ring=ring)
    return series_inverse(td)


@dataclass(frozen=True)
class PairingFunctional:
    """lambda -> integral_X Ch(i_* O_C) * lambda, realized over C."""

    sub: EmbeddedSubmanifold
    density: GradedClass

    def __call__(self, lam: GradedClass) -> Fraction:
        return integrate(self.sub.restrict(lam) * self.density)

    @property
    def correction(self) -> Fraction:
        """Degree-2 contribution of the density over C: -(deg K_C - deg K_X|_C)/2."""
        return integrate(self.density.part(2))


def pushforward_ch_structure_sheaf(c: EmbeddedSubmanifold) -> PairingFunctional:
    if c.dim != 1 or c.ambient.n != 2:
        raise ValueError("needs a curve in a surface")
    density = c.ring.one() - (c.canonical() - c.ambient_canonical()) / 2
    return PairingFunctional(c, density)


def _charge_over(spec: ChargeSpec, c: EmbeddedSubmanifold, ch: GradedClass, twist: GradedClass) -> list:
    """Coefficients of sum_d rho_d k^d integral_S omega^d ch U twist."""
    omega = c.restrict(spec.omega)
    u = c.restrict(spec.u)
    base = ch * u * twist
    out = []
    power = c.ring.one()
    for d in range(spec.ring.n + 1):
        out.append(spec.rho[d] * integrate(power * base))
        power = power * omega
    return out


def _default_spec(ring: IntersectionRing) -> ChargeSpec:
    omega = next(ring.gen(name) for name, d in ring.generators if d == 2)
    return preset("dhym", ring, omega)


def cy_anomaly_check(e: BundleData, c: EmbeddedSubmanifold, ambient: str,
                     spec: ChargeSpec | None = None) -> dict:
    """Z_C(E (x) K_C^{-1/2}) against Z(E (x) O_C) on a Calabi-Yau ambient.

    The left side twists by exp(-K/2); the right side uses Td(N)^{-1} from
    the Todd class of the normal bundle.  Both are exact polynomials in k.
    Without ``spec`` the dHYM charge with omega = first degree-2 generator is used.
    """
    expected_n = {"cy_surface": 2, "cy_threefold_curve": 3}
    if ambient not in expected_n:
        raise ValueError(f"unknown ambient kind {ambient!r}")
    if c.ambient.n != expected_n[ambient] or c.dim != 1:
        raise ValueError(f"{ambient} needs a curve in dimension {expected_n[ambient]}")
    if c.deg_KX_restricted != 0:
        raise ValueError("ambient is not Calabi-Yau (K_X restricted to C is nonzero)")
    spec = spec if spec is not None else _default_spec(c.ambient)
    ch = c.restrict(e.ch)
    lhs = _charge_over(spec, c, ch, exp_class(-(c.canonical() / 2)))
    rhs = _charge_over(spec, c, ch, todd_inverse_normal(c, cy=True))
    equal = all((a - b).is_zero() for a, b in zip(lhs, rhs))
    return {"lhs": lhs, "rhs": rhs, "equal": equal}


def divisor_coefficient() -> Fraction:
    """Coefficient of c_1(K)^2 in Td(N)^{-1} Ch(K^{1/2}) for N = K (a line bundle)."""
    ring = IntersectionRing(2, [("K", 2)], {"K^2": 1})
    k = ring.gen("K")
    td_inv = series_inverse(char_class("todd", 1, [k], ring=ring))
    prod = td_inv * exp_class(k / 2)
    if prod.part(2) != ring.zero():
        raise AssertionError("degree-2 part of the twisted Todd inverse should cancel")
    return prod.coeff("K^2")


def cy_divisor_discrepancy(d: EmbeddedSubmanifold, spec: ChargeSpec | None = None,
                           e: BundleData | None = None, at_k=1) -> dict:
    """Degree-4 discrepancy coefficient (1/24) * integral_D c_1(K_D)^2 and, given a
    charge and a bundle, the mismatch Z(E (x) K_D^{1/2}) - Z_D(E) at scale k."""
    if d.dim != 2 or d.ambient.n != 3:
        raise ValueError("needs a surface in a threefold")
    if d.deg_KX_restricted != 0:
        raise ValueError("ambient must have c_1 = 0")
    prod = todd_inverse_normal(d, cy=True) * exp_class(d.canonical() / 2)
    lower = prod.part(2)
    if not lower.is_zero():
        raise AssertionError("degree-2 discrepancy should vanish")
    k2 = integrate(d.canonical() ** 2)
    out = {
        "universal_coefficient": divisor_coefficient(),
        "k_squared": k2,
        "discrepancy": integrate(prod.part(4)),
    }
    if spec is not None and e is not None:
        ch = d.restrict(e.ch)
        twisted = _charge_over(spec, d, ch, prod)
        plain = _charge_over(spec, d, ch, d.ring.one())
        k = to_scalar(at_k)
        total = GaussianRational(0, 0)
        for j, (a, b) in enumerate(zip(twisted, plain)):
            total = total + (a - b) * (k ** j)
        out["mismatch"] = total
    return out
