"""SL(2,C) representation calculus on multisets of irreducibles s^k.

Representations are never realized as matrices; everything here is
Clebsch-Gordan bookkeeping plus the classical GIT description of binary forms.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

__all__ = [
    "Sl2Rep",
    "VirtualSl2Rep",
    "s",
    "parse_rep",
    "decompose_product",
    "weights_of",
    "weight_decompose",
    "rep_subtract",
    "gl",
    "sl",
    "MODELS",
    "deformation_space",
    "git_classify",
    "git_classify_sum",
    "git_classify_pair",
]


def _clean(mults) -> dict:
    return {int(k): int(v) for k, v in sorted(dict(mults).items(), reverse=True) if v}


@dataclass(frozen=True)
class VirtualSl2Rep:
    """Formal difference: multiplicities may be negative."""

    multiplicities: dict = field(default_factory=dict)

    def __post_init__(self):
        for k in self.multiplicities:
            if int(k) < 0:
                raise ValueError("labels k of s^k are nonnegative")
        object.__setattr__(self, "multiplicities", _clean(self.multiplicities))

    @property
    def effective(self) -> bool:
        return all(v >= 0 for v in self.multiplicities.values())

    @property
    def dimension(self) -> int:
        return sum(m * (k + 1) for k, m in self.multiplicities.items())

    def to_rep(self) -> "Sl2Rep":
        if not self.effective:
            raise ValueError(f"virtual representation {self} is not effective")
        return Sl2Rep(self.multiplicities)

    def __str__(self):
        return format_rep(self.multiplicities)


@dataclass(frozen=True)
class Sl2Rep:
    multiplicities: dict = field(default_factory=dict)

    def __post_init__(self):
        for k, v in self.multiplicities.items():
            if int(k) < 0 or int(v) < 0:
                raise ValueError("labels and multiplicities must be nonnegative")
        object.__setattr__(self, "multiplicities", _clean(self.multiplicities))

    @property
    def dimension(self) -> int:
        return sum(m * (k + 1) for k, m in self.multiplicities.items())

    def __add__(self, other: "Sl2Rep") -> "Sl2Rep":
        c = Counter(self.multiplicities)
        c.update(other.multiplicities)
        return Sl2Rep(c)

    def __mul__(self, other: "Sl2Rep") -> "Sl2Rep":
        return decompose_product("tensor", self, other)

    def __rmul__(self, n: int) -> "Sl2Rep":
        return Sl2Rep({k: n * m for k, m in self.multiplicities.items()})

    def __sub__(self, other: "Sl2Rep") -> VirtualSl2Rep:
        return rep_subtract(self, other)

    def items(self):
        return self.multiplicities.items()

    def __str__(self):
        return format_rep(self.multiplicities)


def s(k: int, mult: int = 1) -> Sl2Rep:
    return Sl2Rep({k: mult})


def format_rep(mults: dict) -> str:
    if not mults:
        return "0"
    parts = []
    for k, m in mults.items():
        parts.append(f"s{k}" if m == 1 else "-s%d" % k if m == -1 else f"{m}*s{k}")
    return "+".join(parts).replace("+-", "-")


_TERM = re.compile(r"^(?:(\d+)\*)?s(\d+)$")


def parse_rep(text: str) -> Sl2Rep:
    """Parse strings like ``s12+2*s8`` (``0`` is the zero representation)."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return Sl2Rep()
    c = Counter()
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse representation term {term!r}")
        c[int(m.group(2))] += int(m.group(1) or 1)
    return Sl2Rep(c)


def _cg(k: int, l: int) -> Counter:
    return Counter(range(k + l, abs(k - l) - 1, -2))


def _sym2_irr(k: int) -> Counter:
    return Counter(range(2 * k, -1, -4))


def _wedge2_irr(k: int) -> Counter:
    return Counter(range(2 * k - 2, -1, -4))


def decompose_product(kind: str, a: Sl2Rep, b: Sl2Rep | None = None) -> Sl2Rep:
    """Tensor product, or Sym^2 / Lambda^2 of a (possibly reducible) representation."""
    out = Counter()
    if kind == "tensor":
        if b is None:
            raise ValueError("tensor needs two representations")
        for k, m in a.items():
            for l, n in b.items():
                for j, c in _cg(k, l).items():
                    out[j] += m * n * c
        return Sl2Rep(out)
    if kind not in ("sym2", "wedge2"):
        raise ValueError(f"unknown product kind {kind!r}")
    if b is not None:
        raise ValueError(f"{kind} is unary")
    irr = _sym2_irr if kind == "sym2" else _wedge2_irr
    other = _wedge2_irr if kind == "sym2" else _sym2_irr
    items = list(a.items())
    for i, (k, m) in enumerate(items):
        # Sym^2(m s^k) = m Sym^2 s^k + C(m,2) s^k (x) s^k, and the Lambda^2 analogue
        for j, c in irr(k).items():
            out[j] += m * c
        pairs = m * (m - 1) // 2
        for j, c in (irr(k) + other(k)).items():
            out[j] += pairs * c
        for l, n in items[i + 1:]:
            for j, c in _cg(k, l).items():
                out[j] += m * n * c
    return Sl2Rep(out)


def weights_of(rep: Sl2Rep) -> Counter:
    w = Counter()
    for k, m in rep.items():
        for j in range(-k, k + 1, 2):
            w[j] += m
    return w


def weight_decompose(weights) -> Sl2Rep:
    """Recover the representation from its weight multiplicities by peeling highest weights."""
    w = Counter({int(k): int(v) for k, v in dict(weights).items() if v})
    for j, m in w.items():
        if m < 0:
            raise ValueError("weight multiplicities must be nonnegative")
        if w.get(-j, 0) != m:
            raise ValueError(f"weights not symmetric at {j}")
    out = Counter()
    while w:
        top = max(w)
        if top < 0:
            raise ValueError("weights are not realizable")
        m = w[top]
        out[top] += m
        for j in range(-top, top + 1, 2):
            w[j] -= m
            if w[j] < 0:
                raise ValueError("weights are not realizable")
            if w[j] == 0:
                del w[j]
    return Sl2Rep(out)


def rep_subtract(a: Sl2Rep, b: Sl2Rep) -> VirtualSl2Rep:
    c = Counter(a.multiplicities)
    c.subtract(b.multiplicities)
    return VirtualSl2Rep(dict(c))


def gl(v: Sl2Rep) -> Sl2Rep:
    return decompose_product("tensor", v, v)


def sl(v: Sl2Rep) -> Sl2Rep:
    return rep_subtract(gl(v), s(0)).to_rep()


@dataclass(frozen=True)
class _Model:
    m: int
    plane: int
    description: str


MODELS = {
    "v22": _Model(6, 2, "3-planes of two-forms on s^6 at s^2"),
    "v5": _Model(4, 2, "3-planes of two-forms on s^4 at s^2"),
    "v14": _Model(5, 4, "5-planes of two-forms on s^5 at s^4"),
}


def deformation_space(model: str) -> dict:
    """T = Hom(Pi_0, complement) minus the acting algebra sl(s^m) / s^2."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {sorted(MODELS)}")
    mdl = MODELS[model]
    v = s(mdl.m)
    forms = decompose_product("wedge2", v)
    plane = s(mdl.plane)
    complement = rep_subtract(forms, plane).to_rep()
    tangent = decompose_product("tensor", plane, complement)
    algebra = rep_subtract(sl(v), s(2)).to_rep()
    diff = rep_subtract(tangent, algebra)
    if not diff.effective:
        raise RuntimeError(f"non-effective difference {diff} (tangent {tangent}, algebra {algebra})")
    result = diff.to_rep()
    return {
        "model": model,
        "two_forms": str(forms),
        "grassmannian_tangent": str(tangent),
        "grassmannian_dimension": tangent.dimension,
        "acting_algebra": str(algebra),
        "deformation_space": str(result),
        "dimension": result.dimension,
        "rep": result,
    }


def _zeros(zeros) -> Counter | None:
    if zeros is None:
        return None
    items = zeros.items() if hasattr(zeros, "items") else zeros
    c = Counter()
    for label, mult in items:
        if int(mult) <= 0:
            raise ValueError("zero multiplicities must be positive")
        c[label] += int(mult)
    return c


def git_classify(p: int, zeros) -> str:
    """GIT type of a binary form of degree p from its zero multiplicities.

    ``zeros`` is a mapping or list of (label, multiplicity); None stands for the
    zero polynomial.
    """
    z = _zeros(zeros)
    if z is None:
        return "zero_orbit"
    if sum(z.values()) != p:
        raise ValueError(f"multiplicities sum to {sum(z.values())}, expected {p}")
    mults = sorted(z.values(), reverse=True)
    top = mults[0]
    if 2 * top > p:
        return "unstable"
    if 2 * top < p:
        return "stable"
    if len(mults) == 2 and 2 * mults[1] == p:
        return "strictly_polystable"
    return "strictly_semistable"


def git_classify_sum(zeros12, zeros4) -> str:
    """Union-of-zeros rule on s^12 + s^4 with p = 16.

    A zero factor is dropped and the other one is classified on its own.
    """
    a, b = _zeros(zeros12), _zeros(zeros4)
    for z, p in ((a, 12), (b, 4)):
        if z is not None and sum(z.values()) != p:
            raise ValueError(f"multiplicities sum to {sum(z.values())}, expected {p}")
    if a is None and b is None:
        return "zero_orbit"
    if a is None:
        return git_classify(4, b)
    if b is None:
        return git_classify(12, a)
    return git_classify(16, a + b)


def git_classify_pair(factors) -> str:
    """Hilbert-Mumford classification of a tuple of binary forms.

    ``factors`` is a list of (p, zeros); zeros None is the zero form.  The tuple
    is unstable iff some point is a zero of order > p/2 of every nonzero
    factor, and semistable but not stable iff some point has order >= p/2 in
    each.  This is the exact criterion that the union rule approximates.
    """
    parsed = []
    for p, zeros in factors:
        z = _zeros(zeros)
        if z is not None and sum(z.values()) != p:
            raise ValueError(f"multiplicities sum to {sum(z.values())}, expected {p}")
        if z is not None:
            parsed.append((p, z))
    if not parsed:
        return "zero_orbit"
    points = set().union(*(z.keys() for _, z in parsed))

    def all_at(pt, strict):
        return all((2 * z.get(pt, 0) > p) if strict else (2 * z.get(pt, 0) >= p) for p, z in parsed)

    if any(all_at(pt, True) for pt in points):
        return "unstable"
    bad = [pt for pt in points if all_at(pt, False)]
    if not bad:
        return "stable"
    # closed orbit with a C* stabilizer: every factor is x^{p/2} y^{p/2} at a common pair
    for pt in bad:
        for other in points - {pt}:
            if all(set(z) == {pt, other} and 2 * z[pt] == p and 2 * z[other] == p for p, z in parsed):
                return "strictly_polystable"
    return "strictly_semistable"
