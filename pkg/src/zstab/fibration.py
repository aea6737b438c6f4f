"""Donaldson-Futaki invariants, fibration expansions W_0 / W_1, twisted Segre
classes and the projective-bundle pushforward calculus for deformations to the
normal cone of P(F) in P(E).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from sympy import QQ
from sympy.polys.rings import ring

from .ring import to_scalar

__all__ = [
    "WeightData",
    "df_invariant",
    "w0",
    "w1_fano",
    "RTResult",
    "rt_df",
    "segre_twist",
    "SymDeg2Poly",
    "ProjBundleDegeneration",
    "a_identity_check",
    "b_constant",
    "w1_prefactor",
    "sweep",
]


@dataclass(frozen=True)
class WeightData:
    a0: Fraction
    a1: Fraction
    b0: Fraction
    b1: Fraction

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            object.__setattr__(self, name, to_scalar(getattr(self, name)))


def df_invariant(w: WeightData) -> Fraction:
    """(a0 b1 - b0 a1) / a0."""
    if w.a0 == 0:
        raise ValueError("a0 must be nonzero")
    return (w.a0 * w.b1 - w.b0 * w.a1) / w.a0


def w0(n: int, m: int, ln, df_fibre) -> Fraction:
    """Leading fibration coefficient binom(m+n, n) L^n DF(fibre)."""
    ln = to_scalar(ln)
    if not ln > 0:
        raise ValueError("L^n must be positive")
    return comb(m + n, n) * ln * to_scalar(df_fibre)


def w1_fano(n: int, m: int, i1, i2, i3, gamma=None, gamma_data=None) -> Fraction:
    """binom(n+m, n-1) (m/(m+2) I_1 + gamma/(m+1) I_2 + I_3).

    I_1 = L^{n-1}.H^{m+2}, I_2 = L^n.H^{m+1}, I_3 = L^{n-1}.H^{m+1}.K.
    ``gamma_data`` = (L^{n-1}.(-K)^{m+1}, L^n.(-K)^m) computes gamma.
    """
    if m < 0 or n < 1:
        raise ValueError("need n >= 1 and m >= 0")
    if gamma is None:
        if gamma_data is None:
            raise ValueError("supply gamma or gamma_data")
        num, den = map(to_scalar, gamma_data)
        if den == 0:
            raise ValueError("L^n.(-K)^m must be nonzero")
        gamma = num / den
    gamma = to_scalar(gamma)
    i1, i2, i3 = map(to_scalar, (i1, i2, i3))
    return comb(n + m, n - 1) * (Fraction(m, m + 2) * i1 + gamma / (m + 1) * i2 + i3)


def _poly_integral(coeffs, c: Fraction) -> Fraction:
    return sum((to_scalar(a) * c ** (k + 1) / (k + 1) for k, a in enumerate(coeffs)), Fraction(0))


def _poly_derivative(coeffs) -> list:
    return [k * to_scalar(a) for k, a in enumerate(coeffs)][1:]


@dataclass(frozen=True)
class RTResult:
    value: Fraction
    b0: Fraction
    b1: Fraction
    integral_a0: Fraction
    integral_a1_corrected: Fraction


def rt_df(a0x, a1x, a0, a1, c) -> RTResult:
    """a1 int_0^c a0(x) dx - a0 int_0^c (a1(x) + a0'(x)/2) dx.

    ``a0x``, ``a1x`` are coefficient lists in x.  This equals b0 a1 - a0 b1, so
    value = -a0 * df_invariant(a0, a1, b0, b1).
    """
    c = to_scalar(c)
    if not c > 0:
        raise ValueError("c must be positive")
    a0, a1 = to_scalar(a0), to_scalar(a1)
    ia0 = _poly_integral(a0x, c)
    der = _poly_derivative(a0x)
    m = max(len(a1x), len(der))
    corrected = [(to_scalar(a1x[k]) if k < len(a1x) else 0) + (der[k] / 2 if k < len(der) else 0)
                 for k in range(m)]
    ia1 = _poly_integral(corrected, c)
    b0 = ia0 - c * a0
    b1 = ia1 - c * a1
    return RTResult(a1 * ia0 - a0 * ia1, b0, b1, ia0, ia1)


def segre_twist(q: int, rank: int, segre, c1l):
    """s_q(E (x) L) = sum_j (-1)^{q-j} binom(rank-1+q, rank-1+j) s_j(E) c_1(L)^{q-j}."""
    if q < 0:
        raise ValueError("q must be >= 0")
    if len(segre) <= q:
        raise ValueError(f"need s_0..s_{q}")
    if segre[0] != 1:
        raise ValueError("s_0 must be 1")
    total = 0
    for j in range(q + 1):
        total = total + (-1) ** (q - j) * comb(rank - 1 + q, rank - 1 + j) * segre[j] * c1l ** (q - j)
    return total


DEG_RING, DE, DF = ring("dE,dF", QQ)
_CALC, _Z, _E1, _F1 = ring("z,e1,f1", QQ)


class SymDeg2Poly:
    """Polynomial in the formal degrees dE, dF with rational coefficients."""

    __slots__ = ("poly",)

    def __init__(self, poly):
        self.poly = DEG_RING(poly) if not hasattr(poly, "ring") else poly

    @classmethod
    def linear(cls, ce, cf, const=0):
        return cls(DEG_RING(QQ(ce.numerator, ce.denominator)) * DE
                   + DEG_RING(QQ(cf.numerator, cf.denominator)) * DF + DEG_RING(const))

    def coefficient(self, name: str) -> Fraction:
        gen = {"dE": (1, 0), "dF": (0, 1), "1": (0, 0)}[name]
        q = self.poly.get(gen, QQ(0))
        return Fraction(int(q.numerator), int(q.denominator))

    def evaluate(self, de, df) -> Fraction:
        de, df = to_scalar(de), to_scalar(df)
        out = Fraction(0)
        for (i, j), c in self.poly.items():
            out += Fraction(int(c.numerator), int(c.denominator)) * de ** i * df ** j
        return out

    def is_zero(self) -> bool:
        return not self.poly

    def __eq__(self, other):
        if isinstance(other, SymDeg2Poly):
            return self.poly == other.poly
        return NotImplemented

    __hash__ = None

    def __sub__(self, other):
        return SymDeg2Poly(self.poly - other.poly)

    def __mul__(self, c):
        c = to_scalar(c)
        return SymDeg2Poly(self.poly * QQ(c.numerator, c.denominator))

    __rmul__ = __mul__

    def ratio_to(self, other) -> Fraction | None:
        """c with self = c * other, or None when not proportional."""
        if other.is_zero():
            return Fraction(0) if self.is_zero() else None
        mono, lead = next(iter(other.poly.items()))
        c = self.poly.get(mono, QQ(0)) / lead
        if self.poly != other.poly * c:
            return None
        return Fraction(int(c.numerator), int(c.denominator))

    def __str__(self):
        return str(self.poly.as_expr())

    def __repr__(self):
        return f"SymDeg2Poly({self})"


@dataclass(frozen=True)
class ProjBundleDegeneration:
    """P(F) in P(E) over an n-dimensional base, H = -K_{P(E)/B}, c = rk E."""

    r_e: int
    r_f: int
    n: int = 1
    d_e: object = None
    d_f: object = None

    def __post_init__(self):
        if not 0 < self.r_f < self.r_e:
            raise ValueError("need 0 < rk F < rk E")
        if self.n < 1:
            raise ValueError("base dimension must be positive")

    @property
    def m(self) -> int:
        return self.r_e - 1

    @property
    def p(self) -> int:
        return self.r_e - self.r_f

    @property
    def c(self) -> int:
        return self.r_e


def _truncate(poly):
    """Keep terms of base degree <= 1 in (e1, f1)."""
    return _CALC.from_dict({mono: c for mono, c in poly.items() if mono[1] + mono[2] <= 1})


def _push(poly, rank: int, segre: dict):
    """pi_* z^{rank-1+j} = s_j on a projective bundle of the given rank."""
    out = _CALC.zero
    for (k, a, b), c in poly.items():
        j = k - (rank - 1)
        if j in segre:
            out += c * segre[j] * _E1 ** a * _F1 ** b
    return _truncate(out)


def _intersection_table(d: ProjBundleDegeneration) -> dict:
    """i -> integral of L^{n-1} H^i Ecal^{m+1-i}, as linear forms in (e1, f1)."""
    m, p, r_e, r_f = d.m, d.p, d.r_e, d.r_f
    s_e = {0: _CALC.one, 1: -_E1}
    s_f = {0: _CALC.one, 1: -_F1}
    s_q = {0: _CALC.one, 1: -(_E1 - _F1)}
    h = r_e * _Z + _E1
    table = {}
    powers = [_CALC.one]
    for _ in range(m + 2):
        powers.append(_truncate(powers[-1] * h))

    def seg_n(q):
        if q < 0:
            return _CALC.zero
        return segre_twist(q, p, [s_q.get(j, _CALC.zero) for j in range(q + 1)], _Z)

    for i in range(m + 2):
        if m + 1 - i == 0:
            table[i] = _push(powers[i], r_e, s_e)
        else:
            table[i] = (-1) ** (m - i) * _push(_truncate(seg_n(m - p - i + 1) * powers[i]), r_f, s_f)
    return table


def _a_value(d: ProjBundleDegeneration):
    m, p, c = d.m, d.p, d.c
    term = _intersection_table(d)
    t1 = _CALC.zero
    for j in range(1, m + 3):
        t1 += comb(m + 2, j) * (-c) ** j * term[m + 2 - j]
    t2 = _CALC.zero
    for k in range(1, m + 3):
        coef = 0
        for b in (0, 1):
            a = k - b
            if 0 <= a <= m + 1:
                coef += comb(m + 1, a) * (-c) ** a * ((-p) if b else 1)
        t2 += coef * term[m + 2 - k]
    return -QQ(m, m + 2) * t1 + t2


def _to_deg(poly) -> tuple[SymDeg2Poly, Fraction]:
    lin = DEG_RING.zero
    const = QQ(0)
    for (k, a, b), c in poly.items():
        if k:
            raise AssertionError("fibre class survived the pushforward")
        if a + b == 0:
            const += c
        else:
            lin += c * DE ** a * DF ** b
    return SymDeg2Poly(lin), Fraction(int(const.numerator), int(const.denominator))


def b_constant(r_e: int, r_f: int) -> Fraction:
    """The printed double-binomial sum for B."""
    if not 0 < r_f < r_e:
        raise ValueError("need 0 < rk F < rk E")
    total = Fraction(0)
    for i in range(r_f + 1):
        inner = -r_e + 1 + Fraction(i * r_e + (r_e - r_f) * (r_e + 1 - i), r_e)
        total += ((-1) ** (r_f - i) * comb(r_e + 1, i) * comb(r_e - 1 - i, r_e - 1 - r_f)
                  * Fraction(r_e - i, r_e - r_f) * inner)
    return total


def w1_prefactor(m: int, n: int) -> Fraction:
    """W_1 = prefactor * A for the deformation to the normal cone."""
    return Fraction(1, 2 * factorial(m + 1) * factorial(n - 1))


def a_identity_check(d: ProjBundleDegeneration) -> dict:
    """A from the pushforward calculus against B (rk E)^{rk E} (rk E dF - rk F dE)."""
    a_poly, extra = _to_deg(_a_value(d))
    b = b_constant(d.r_e, d.r_f)
    slope_form = SymDeg2Poly.linear(Fraction(-d.r_f), Fraction(d.r_e))
    closed = slope_form * (b * d.r_e ** d.r_e)
    ratio = a_poly.ratio_to(closed)
    out = {
        "rE": d.r_e,
        "rF": d.r_f,
        "A": a_poly,
        "closed_form": closed,
        "B": b,
        "match": a_poly == closed and extra == 0,
        "ratio_A_to_closed": ratio,
        "A_over_slope_form": a_poly.ratio_to(slope_form),
        "extra_constant_term": extra,
        "w1_prefactor": w1_prefactor(d.m, d.n),
    }
    if d.d_e is not None and d.d_f is not None:
        out["A_value"] = a_poly.evaluate(d.d_e, d.d_f)
        out["closed_value"] = closed.evaluate(d.d_e, d.d_f)
    return out


def sweep(max_r_e: int = 8) -> list:
    rows = []
    for r_e in range(2, max_r_e + 1):
        for r_f in range(1, r_e):
            rows.append(a_identity_check(ProjBundleDegeneration(r_e, r_f)))
    return rows
