"""Truncated intersection rings and characteristic classes.

Scalars are kept generic: ``Fraction`` by default, but any exact field
element with ``+ - *`` and ``== 0`` works.  Elements of a sympy
``PolyRing`` over QQ are used for symbolic parameters (sigma, b, t, ...).
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

__all__ = [
    "IntersectionRing",
    "GradedClass",
    "CGradedClass",
    "GaussianRational",
    "BundleData",
    "multiply",
    "integrate",
    "char_class",
    "series_sqrt",
    "series_inverse",
    "exp_class",
    "chern_from_ch",
    "to_scalar",
    "is_zero",
]


def to_scalar(x):
    """Coerce ints, strings like "3/2" and Fractions to Fraction; leave others alone."""
    if isinstance(x, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted")
    return x


def is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    expand = getattr(c, "expand", None)
    if expand is not None and not hasattr(c, "ring"):
        return expand() == 0
    return c == 0


def _binom_frac(a: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out = out * (a - i) / (i + 1)
    return out


class IntersectionRing:
    """Free commutative ring on even-degree generators, truncated above 2n."""

    def __init__(self, n: int, generators, integral_table):
        if not isinstance(n, int) or n <= 0:
            raise ValueError("complex dimension n must be a positive integer")
        gens = []
        for name, deg in generators:
            if not isinstance(deg, int) or deg <= 0 or deg % 2 or deg > 2 * n:
                raise ValueError(f"generator {name!r}: degree {deg} must be even in [2, {2 * n}]")
            gens.append((str(name), deg))
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.n = n
        self.generators = tuple(gens)
        self.names = tuple(names)
        self.degrees = tuple(g[1] for g in gens)
        table = {}
        for key, val in dict(integral_table).items():
            mono = self.monomial(key)
            if self.mono_degree(mono) != 2 * n:
                raise ValueError(f"integral table entry {key!r} is not of top degree {2 * n}")
            table[mono] = to_scalar(val)
        missing = [m for m in self.monomials_of_degree(2 * n) if m not in table]
        if missing:
            raise ValueError("integral table missing entries for: "
                             + ", ".join(self.format_monomial(m) for m in missing))
        self.integral_table = table

    # monomial bookkeeping

    def monomial(self, key) -> tuple:
        if isinstance(key, tuple):
            if len(key) != len(self.names):
                raise ValueError(f"monomial {key!r} has wrong length")
            return key
        if isinstance(key, Mapping):
            exps = [0] * len(self.names)
            for name, e in key.items():
                exps[self.names.index(name)] += int(e)
            return tuple(exps)
        if isinstance(key, str):
            exps = [0] * len(self.names)
            s = key.replace(" ", "")
            if s in ("", "1"):
                return tuple(exps)
            for factor in s.split("*"):
                m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+)|\*\*(\d+))?", factor)
                if not m or m.group(1) not in self.names:
                    raise ValueError(f"cannot parse monomial factor {factor!r} in {key!r}")
                exps[self.names.index(m.group(1))] += int(m.group(2) or m.group(3) or 1)
            return tuple(exps)
        raise TypeError(f"bad monomial key {key!r}")

    def mono_degree(self, mono: tuple) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def format_monomial(self, mono: tuple) -> str:
        parts = []
        for name, e in zip(self.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def monomials_of_degree(self, deg: int) -> list:
        out = []

        def rec(i, remaining, acc):
            if i == len(self.degrees):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            d = self.degrees[i]
            for e in range(remaining // d + 1):
                rec(i + 1, remaining - e * d, acc + [e])

        rec(0, deg, [])
        return out

    # constructors

    def cls(self, coeffs=None) -> "GradedClass":
        coeffs = coeffs or {}
        return GradedClass(self, {self.monomial(k): to_scalar(v) for k, v in dict(coeffs).items()})

    def scalar(self, c) -> "GradedClass":
        return GradedClass(self, {tuple([0] * len(self.names)): to_scalar(c)})

    def one(self) -> "GradedClass":
        return self.scalar(1)

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def gen(self, name: str) -> "GradedClass":
        return self.cls({name: 1})

    def __eq__(self, other):
        return (isinstance(other, IntersectionRing) and self.n == other.n
                and self.generators == other.generators
                and self.integral_table == other.integral_table)

    def __hash__(self):
        return hash((self.n, self.generators))

    def __repr__(self):
        return f"IntersectionRing(n={self.n}, generators={list(self.generators)})"


class GradedClass:
    """An inhomogeneous class: monomial -> coefficient, truncated above 2n."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: IntersectionRing, coeffs: Mapping):
        top = 2 * ring.n
        clean = {}
        for mono, c in coeffs.items():
            if ring.mono_degree(mono) > top or is_zero(c):
                continue
            clean[mono] = c
        self.ring = ring
        self.coeffs = clean

    def _check(self, other):
        if not isinstance(other, GradedClass):
            raise TypeError("expected a GradedClass")
        if other.ring is not self.ring and other.ring != self.ring:
            raise ValueError("classes live in different rings")

    def _lift(self, other):
        if isinstance(other, GradedClass):
            self._check(other)
            return other
        return self.ring.scalar(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return GradedClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.ring, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, GradedClass):
            if isinstance(other, (CGradedClass, GaussianRational)):
                return NotImplemented
            c = to_scalar(other)
            return GradedClass(self.ring, {m: v * c for m, v in self.coeffs.items()})
        self._check(other)
        top = 2 * self.ring.n
        out = {}
        for m1, c1 in self.coeffs.items():
            d1 = self.ring.mono_degree(m1)
            for m2, c2 in other.coeffs.items():
                if d1 + self.ring.mono_degree(m2) > top:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return GradedClass(self.ring, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        c = to_scalar(other)
        return GradedClass(self.ring, {m: v / c for m, v in self.coeffs.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GradedClass):
            if other.ring != self.ring:
                return False
            return (self - other).is_zero()
        try:
            return (self - self.ring.scalar(other)).is_zero()
        except TypeError:
            return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.coeffs.values())

    def part(self, deg: int) -> "GradedClass":
        """Degree-``deg`` component (real cohomological degree)."""
        return GradedClass(self.ring, {m: c for m, c in self.coeffs.items()
                                       if self.ring.mono_degree(m) == deg})

    def constant(self):
        return self.coeffs.get(tuple([0] * len(self.ring.names)), Fraction(0))

    def degrees_present(self) -> list:
        return sorted({self.ring.mono_degree(m) for m in self.coeffs})

    def is_homogeneous(self, deg: int) -> bool:
        return all(self.ring.mono_degree(m) == deg for m in self.coeffs)

    def map_coeffs(self, f) -> "GradedClass":
        return GradedClass(self.ring, {m: f(c) for m, c in self.coeffs.items()})

    def coeff(self, key):
        return self.coeffs.get(self.ring.monomial(key), Fraction(0))

    def __repr__(self):
        return f"GradedClass({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda mc: (self.ring.mono_degree(mc[0]), mc[0]))
        parts = []
        for m, c in items:
            mono = self.ring.format_monomial(m)
            parts.append(f"({c})" if mono == "1" else f"({c})*{mono}")
        return " + ".join(parts)


def multiply(a: GradedClass, b: GradedClass) -> GradedClass:
    if not isinstance(a, GradedClass) or not isinstance(b, GradedClass):
        raise TypeError("multiply expects two GradedClass values")
    return a * b


def integrate(a: GradedClass):
    """Pair the top-degree part with the integral table."""
    ring = a.ring
    top = 2 * ring.n
    total = Fraction(0)
    for m, c in a.coeffs.items():
        if ring.mono_degree(m) != top:
            continue
        if m not in ring.integral_table:
            raise KeyError(f"missing integral table entry for {ring.format_monomial(m)}")
        total = total + c * ring.integral_table[m]
    return total


def _nilpotent_part(u: GradedClass, expect_constant) -> GradedClass:
    c0 = u.constant()
    if not is_zero(c0 - expect_constant):
        raise ValueError(f"degree-0 part must be {expect_constant}, got {c0}")
    return u - u.ring.scalar(c0)


def _power_series(nil: GradedClass, coeffs) -> GradedClass:
    """Sum coeffs[j] * nil^j; nil^j vanishes for j > n."""
    ring = nil.ring
    out = ring.zero()
    power = ring.one()
    for j in range(ring.n + 1):
        out = out + power * coeffs(j)
        power = power * nil
        if power.is_zero():
            break
    return out


def series_sqrt(u: GradedClass) -> GradedClass:
    """Square root of a unipotent class by the binomial series."""
    nil = _nilpotent_part(u, 1)
    half = Fraction(1, 2)
    return _power_series(nil, lambda j: _binom_frac(half, j))


def series_inverse(u: GradedClass) -> GradedClass:
    nil = _nilpotent_part(u, 1)
    return _power_series(nil, lambda j: Fraction((-1) ** j))


def exp_class(a: GradedClass) -> GradedClass:
    nil = _nilpotent_part(a, 0)
    return _power_series(nil, lambda j: Fraction(1, factorial(j)))


def log_class(u: GradedClass) -> GradedClass:
    nil = _nilpotent_part(u, 1)
    return _power_series(nil, lambda j: Fraction(0) if j == 0 else Fraction((-1) ** (j + 1), j))


def _power_sums(ring: IntersectionRing, chern: list) -> list:
    """Newton's identities: power sums p_1..p_n of the Chern roots."""
    n = ring.n
    c = [ring.one()] + [chern[i] if i < len(chern) and chern[i] is not None else ring.zero()
                        for i in range(n)]
    p = [None]
    for k in range(1, n + 1):
        acc = c[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            acc = acc + c[i] * p[k - i] * ((-1) ** (i - 1))
        p.append(acc)
    return p


def _todd_log_coeffs(n: int) -> list:
    """Coefficients q_k of log(x / (1 - e^{-x})) = sum q_k x^k, k <= n."""
    # f(x) = (1 - e^{-x})/x = sum_{j} (-1)^j x^j/(j+1)!
    f = [Fraction((-1) ** j, factorial(j + 1)) for j in range(n + 1)]
    # log f via g' = f'/f, computed as a power series
    inv = [Fraction(0)] * (n + 1)
    inv[0] = Fraction(1)
    for k in range(1, n + 1):
        inv[k] = -sum(f[i] * inv[k - i] for i in range(1, k + 1))
    df = [f[j + 1] * (j + 1) for j in range(n)] + [Fraction(0)]
    dlog = [sum(df[i] * inv[k - i] for i in range(k + 1)) for k in range(n + 1)]
    logf = [Fraction(0)] + [dlog[k - 1] / k for k in range(1, n + 1)]
    return [-x for x in logf]


def _homogeneous_check(ring, chern):
    for i, c in enumerate(chern):
        if c is None:
            continue
        if not isinstance(c, GradedClass):
            raise TypeError(f"c_{i + 1} must be a GradedClass")
        if not c.is_homogeneous(2 * (i + 1)):
            raise ValueError(f"c_{i + 1} must be homogeneous of degree {2 * (i + 1)}")


def char_class(kind: str, rank, chern: list, ring: IntersectionRing | None = None) -> GradedClass:
    """Chern character, Todd class or A-hat class from rank and c_1, c_2, ...

    ``chern[i]`` is c_{i+1}; missing entries are zero.
    """
    if ring is None:
        present = [c for c in chern if c is not None]
        if not present:
            raise ValueError("ring must be given when no Chern classes are supplied")
        ring = present[0].ring
    _homogeneous_check(ring, chern)
    chern = list(chern)[: ring.n]
    p = _power_sums(ring, chern)
    if kind == "chern_character":
        out = ring.scalar(to_scalar(rank))
        for k in range(1, ring.n + 1):
            out = out + p[k] / factorial(k)
        return out
    if kind in ("todd", "a_hat"):
        q = _todd_log_coeffs(ring.n)
        log_td = ring.zero()
        for k in range(1, ring.n + 1):
            log_td = log_td + p[k] * q[k]
        td = exp_class(log_td)
        if kind == "todd":
            return td
        c1 = chern[0] if chern and chern[0] is not None else ring.zero()
        return td * exp_class(-(c1 / 2))
    raise ValueError(f"unknown characteristic class kind {kind!r}")


def chern_from_ch(ch: GradedClass) -> list:
    """Inverse Newton: Chern classes c_1..c_n from a Chern character."""
    ring = ch.ring
    n = ring.n
    p = [None] + [ch.part(2 * k) * factorial(k) for k in range(1, n + 1)]
    c = [ring.one()]
    for k in range(1, n + 1):
        acc = ring.zero()
        for i in range(1, k + 1):
            acc = acc + c[k - i] * p[i] * ((-1) ** (i - 1))
        c.append(acc / k)
    return c[1:]


class BundleData:
    """Topological data of a sheaf: its Chern character (degree-0 part = rank)."""

    __slots__ = ("ch", "rank", "chern_classes")

    def __init__(self, ch: GradedClass, rank=None, chern_classes=None):
        r0 = ch.constant()
        if rank is not None and not is_zero(to_scalar(rank) - r0):
            raise ValueError(f"declared rank {rank} disagrees with Ch degree-0 part {r0}")
        if isinstance(r0, Fraction) and r0 < 0:
            raise ValueError("rank must be nonnegative")
        self.ch = ch
        self.rank = r0
        self.chern_classes = chern_classes

    @classmethod
    def from_chern(cls, ring: IntersectionRing, rank, chern: list) -> "BundleData":
        chern = list(chern)
        ch = char_class("chern_character", rank, chern, ring=ring)
        back = chern_from_ch(ch)
        for i, c in enumerate(chern[: ring.n]):
            if c is not None and not (back[i] == c):
                raise ValueError(f"Newton round trip failed for c_{i + 1}")
        return cls(ch, rank, chern)

    @property
    def ring(self):
        return self.ch.ring

    def c1(self) -> GradedClass:
        return self.ch.part(2)

    def dual(self) -> "BundleData":
        ring = self.ch.ring
        out = {}
        for m, c in self.ch.coeffs.items():
            half = ring.mono_degree(m) // 2
            out[m] = -c if half % 2 else c
        return BundleData(GradedClass(ring, out))

    def twist(self, c1_line: GradedClass) -> "BundleData":
        return BundleData(self.ch * exp_class(c1_line))

    def __add__(self, other: "BundleData") -> "BundleData":
        return BundleData(self.ch + other.ch)

    def __sub__(self, other: "BundleData") -> "BundleData":
        return BundleData(self.ch - other.ch)

    def __eq__(self, other):
        return isinstance(other, BundleData) and self.ch == other.ch

    __hash__ = None

    def __repr__(self):
        return f"BundleData(ch={self.ch})"


class GaussianRational:
    """Exact complex number re + i*im with field-valued parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_scalar(re)
        self.im = to_scalar(im)

    @staticmethod
    def lift(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not accepted")
        return GaussianRational(x, 0)

    def __add__(self, other):
        o = GaussianRational.lift(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.lift(other))

    def __rsub__(self, other):
        return GaussianRational.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (GradedClass, CGradedClass)):
            return NotImplemented
        o = GaussianRational.lift(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = GaussianRational.lift(other)
        d = o.norm2()
        if is_zero(d):
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conj()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return GaussianRational.lift(other) / self

    def __pow__(self, k: int):
        out = GaussianRational(1, 0)
        base = self if k >= 0 else GaussianRational(1, 0) / self
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_zero(self):
        return is_zero(self.re) and is_zero(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re} + {self.im}i"


class CGradedClass:
    """Complex class as a (real, imaginary) pair of GradedClasses."""

    __slots__ = ("real_part", "imag_part")

    def __init__(self, real_part: GradedClass, imag_part: GradedClass | None = None):
        if imag_part is None:
            imag_part = real_part.ring.zero()
        real_part._check(imag_part)
        self.real_part = real_part
        self.imag_part = imag_part

    @property
    def ring(self):
        return self.real_part.ring

    def __add__(self, other):
        if isinstance(other, GradedClass):
            other = CGradedClass(other)
        return CGradedClass(self.real_part + other.real_part, self.imag_part + other.imag_part)

    def __mul__(self, other):
        if isinstance(other, CGradedClass):
            a, b, c, d = self.real_part, self.imag_part, other.real_part, other.imag_part
            return CGradedClass(a * c - b * d, a * d + b * c)
        if isinstance(other, GradedClass):
            return CGradedClass(self.real_part * other, self.imag_part * other)
        z = GaussianRational.lift(other)
        return CGradedClass(self.real_part * z.re - self.imag_part * z.im,
                            self.real_part * z.im + self.imag_part * z.re)

    __rmul__ = __mul__

    def part(self, deg: int) -> "CGradedClass":
        return CGradedClass(self.real_part.part(deg), self.imag_part.part(deg))

    def integrate(self) -> GaussianRational:
        return GaussianRational(integrate(self.real_part), integrate(self.imag_part))

    def __eq__(self, other):
        return (isinstance(other, CGradedClass) and self.real_part == other.real_part
                and self.imag_part == other.imag_part)

    __hash__ = None

    def __repr__(self):
        return f"CGradedClass(re={self.real_part}, im={self.imag_part})"


def monomials_up_to(ring: IntersectionRing, deg: int) -> Iterable[tuple]:
    return itertools.chain.from_iterable(ring.monomials_of_degree(d) for d in range(0, deg + 1, 2))
