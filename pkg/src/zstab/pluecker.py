"""Explicit model of the singular threefold Z_0 in Gr_2(s^5) cut out by the
s^4 subspace of two-forms.

Coordinates: e_1 = x^5, e_2 = x^4 y, ..., e_6 = y^5.  Pluecker coordinates
W_ij (i < j) of a plane a ^ b are a_i b_j - a_j b_i.  The s^8 + s^0 complement
has a 10-element basis v_1..v_10 with coordinates alpha_1..alpha_10.

The linear constraints are the pairings with s^4 under the SL(2)-invariant
pairing on Lambda^2 s^5, which weights e_i ^ e_j by n_i n_j with
n_i = (6-i)! (i-1)!.  The ideal is regenerated from the Pluecker relations.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from sympy import QQ, sympify
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

__all__ = [
    "PAIRS",
    "Wedge2Basis",
    "PlueckerModel",
    "FixedPoint",
    "wedge",
    "plane_coordinates",
    "build_model",
    "jacobian_rank",
    "generic_rank",
    "kernel_membership",
    "kernel_checks",
    "fixed_point_weights",
    "printed_ideal",
    "equivariance_check",
    "verify_report",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20240601

PAIRS = [(i, j) for i in range(1, 7) for j in range(i + 1, 7)]
_INDEX = {p: k for k, p in enumerate(PAIRS)}
_NORM = [factorial(6 - i) * factorial(i - 1) for i in range(1, 7)]

ALPHA_RING, *ALPHA = ring(",".join(f"a{i}" for i in range(1, 11)), QQ)


def basis_weight(i: int) -> int:
    """H-weight of e_i = x^{6-i} y^{i-1}."""
    return 7 - 2 * i


def wedge(*terms) -> list:
    """Vector in Lambda^2 s^5 from terms (c, i, j) meaning c e_i ^ e_j."""
    v = [Fraction(0)] * 15
    for c, i, j in terms:
        if i == j:
            continue
        if i < j:
            v[_INDEX[(i, j)]] += c
        else:
            v[_INDEX[(j, i)]] -= c
    return v


def plane_coordinates(a, b) -> list:
    """Pluecker coordinates of a ^ b."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    return [a[i - 1] * b[j - 1] - a[j - 1] * b[i - 1] for i, j in PAIRS]


def _dm(rows) -> DomainMatrix:
    rows = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows]
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), QQ)


def rank(rows) -> int:
    if not rows:
        return 0
    return _dm(rows).rank()


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def nullspace(rows) -> list:
    """Basis of the right kernel as lists of Fractions."""
    ns = _dm(rows).nullspace().to_Matrix()
    return [[Fraction(str(x)) for x in ns.row(k)] for k in range(ns.rows)]


@dataclass(frozen=True)
class Wedge2Basis:
    s4: list
    s8s0: list

    def rank(self) -> int:
        return rank(self.s4 + self.s8s0)

    @staticmethod
    def weight_of(vec) -> int | None:
        """Common H-weight of the nonzero components, or None if mixed."""
        ws = {basis_weight(i) + basis_weight(j) for (i, j), c in zip(PAIRS, vec) if c}
        return ws.pop() if len(ws) == 1 else None


def _standard_basis() -> Wedge2Basis:
    s4 = [
        wedge((1, 4, 1), (-3, 3, 2)),
        wedge((2, 5, 1), (-4, 4, 2)),
        wedge((1, 6, 1), (1, 5, 2), (-8, 4, 3)),
        wedge((3, 6, 2), (-6, 5, 3)),
        wedge((1, 6, 3), (-3, 5, 4)),
    ]
    s8s0 = [
        wedge((1, 2, 1)),
        wedge((1, 3, 1)),
        wedge((3, 4, 1), (5, 3, 2)),
        wedge((1, 5, 1), (5, 4, 2)),
        wedge((1, 6, 1), (15, 5, 2), (20, 4, 3)),
        wedge((1, 6, 1), (-5, 5, 2), (10, 4, 3)),
        wedge((1, 6, 2), (5, 5, 3)),
        wedge((3, 6, 3), (5, 5, 4)),
        wedge((1, 6, 4)),
        wedge((1, 6, 5)),
    ]
    return Wedge2Basis(s4, s8s0)


def two_form(vec, mode: str = "invariant") -> list:
    """Coefficients of the two-form paired with a Lambda^2 s^5 vector."""
    if mode == "naive":
        return list(vec)
    if mode != "invariant":
        raise ValueError(f"unknown pairing mode {mode!r}")
    return [c * _NORM[i - 1] * _NORM[j - 1] for (i, j), c in zip(PAIRS, vec)]


def _embedding(typo: bool = False) -> list:
    """15 x 10 matrix with W = E alpha, read off from the s^8 + s^0 basis."""
    basis = _standard_basis().s8s0
    e = [[basis[k][r] for k in range(10)] for r in range(15)]
    if typo:
        # printed variant: W_15 = -alpha_3 instead of -alpha_4
        row = _INDEX[(1, 5)]
        e[row] = [Fraction(0)] * 10
        e[row][2] = Fraction(-1)
    return e


def _pluecker_relations(w) -> list:
    out = []
    for i, j, k, l in itertools.combinations(range(1, 7), 4):
        def W(p, q):
            return w[_INDEX[(p, q)]]
        out.append(W(i, j) * W(k, l) - W(i, k) * W(j, l) + W(i, l) * W(j, k))
    return out


def _substitute(emb) -> list:
    w = []
    for row in emb:
        p = ALPHA_RING.zero
        for c, a in zip(row, ALPHA):
            if c:
                p += QQ(c.numerator, c.denominator) * a
        w.append(p)
    return _pluecker_relations(w)


_PRINTED = """a8**2-5*a7*a9+20*a5*a10+10*a6*a10
5*a7*a8-15*a5*a9+5*a6*a9+5*a4*a10
5*a7**2-45*a5*a8+15*a6*a8+5*a3*a10
20*a5*a7+10*a6*a7-15*a4*a8+5*a3*a9
5*a5*a8+5*a6*a8-a3*a9+3*a3*a10
5*a5*a7+5*a6*a7-3*a3*a8+a2*a10
15*a5**2+10*a5*a6-5*a6**2-a3*a7+a1*a10
20*a5**2+30*a5*a6+10*a6**2-9*a3*a8+a2*a9
5*a4*a5+5*a4*a6-3*a3*a7+a1*a9
5*a3*a5+5*a3*a6-a2*a7+3*a1*a8
300*a5**2+50*a5*a6-50*a6**2-25*a4*a7+25*a3*a8
20*a3*a5+10*a3*a6-15*a3*a7+5*a2*a8
5*a3*a4-45*a3*a5+15*a3*a6+5*a1*a8
5*a3**2-15*a2*a5+5*a2*a6+5*a1*a7
15*a3**2-5*a2*a4+20*a1*a5+10*a1*a6"""


def printed_ideal() -> list:
    """The 15 printed generators, transcribed."""
    names = {str(sym): sym for sym in ALPHA_RING.symbols}
    return [ALPHA_RING.from_expr(sympify(line, locals=names)) for line in _PRINTED.splitlines()]


def _coefficient_rows(polys) -> tuple[list, list]:
    monos = sorted({m for p in polys for m in p.keys()})
    rows = [[_to_fraction(p.get(m, QQ(0))) for m in monos] for p in polys]
    return rows, monos


def span_rank(polys) -> int:
    polys = [p for p in polys if p]
    if not polys:
        return 0
    return rank(_coefficient_rows(polys)[0])


def outside_span(reference, polys) -> list:
    """Indices of polys not in the linear span of reference."""
    r = span_rank(reference)
    return [k for k, p in enumerate(polys) if span_rank(list(reference) + [p]) > r]


@dataclass
class PlueckerModel:
    basis: Wedge2Basis
    linear_constraints: list
    printed_constraints: list
    alpha_embedding: list
    ideal: list
    jacobian: list = field(repr=False)

    def embed(self, alpha) -> list:
        alpha = [Fraction(x) for x in alpha]
        return [sum((c * a for c, a in zip(row, alpha)), Fraction(0)) for row in self.alpha_embedding]

    def alpha_of(self, w) -> list:
        """Invert the embedding: alpha with E alpha = W (error if W is off the image)."""
        w = [Fraction(x) for x in w]
        aug = [row + [x] for row, x in zip(self.alpha_embedding, w)]
        if rank(aug) != rank(self.alpha_embedding):
            raise ValueError("W does not lie in the s^8 + s^0 subspace")
        et = _dm(self.alpha_embedding).transpose()
        lhs = et * _dm(self.alpha_embedding)
        rhs = et * _dm([[x] for x in w])
        sol = lhs.to_field().lu_solve(rhs.to_field())
        alpha = [Fraction(str(sol.to_Matrix()[k, 0])) for k in range(10)]
        if self.embed(alpha) != w:
            raise AssertionError("embedding inversion failed")
        return alpha

    def residuals(self, alpha) -> list:
        pt = [QQ(Fraction(x).numerator, Fraction(x).denominator) for x in alpha]
        return [_to_fraction(q(*pt)) for q in self.ideal]

    def satisfies_constraints(self, w) -> bool:
        return all(sum(c * x for c, x in zip(row, w)) == 0 for row in self.linear_constraints)


def build_model(typo: bool = False) -> PlueckerModel:
    basis = _standard_basis()
    if basis.rank() != 15:
        raise RuntimeError("basis of Lambda^2 s^5 is degenerate")
    constraints = [two_form(v) for v in basis.s4]
    emb = _embedding(typo)
    if not typo:
        for row in constraints:
            for k in range(10):
                if sum(row[r] * emb[r][k] for r in range(15)) != 0:
                    raise RuntimeError("constraints do not annihilate the s^8 + s^0 basis")
    ideal = [q for q in _substitute(emb)]
    jac = [[q.diff(a) for a in ALPHA] for q in ideal]
    return PlueckerModel(basis, constraints, [list(v) for v in basis.s4], emb, ideal, jac)


def jacobian_rank(model: PlueckerModel, point, check: bool = True) -> int:
    if check and any(model.residuals(point)):
        raise ValueError("point does not satisfy the ideal")
    pt = [QQ(Fraction(x).numerator, Fraction(x).denominator) for x in point]
    rows = [[_to_fraction(d(*pt)) for d in row] for row in model.jacobian]
    return rank(rows)


def _act_s5(vec, kind: str, t: Fraction) -> list:
    """Coefficients of f(x, y + t x), f(x + t y, y) or f(t x, y / t)."""
    n = 5
    out = [Fraction(0)] * 6
    for i, c in enumerate(vec):
        if not c:
            continue
        px, py = n - i, i  # c x^px y^py
        if kind == "scale":
            out[i] += c * t ** (px - py)
        elif kind == "shear_y":
            # (y + t x)^py x^px
            for j in range(py + 1):
                coeff = Fraction(factorial(py), factorial(j) * factorial(py - j))
                out[j] += c * coeff * t ** (py - j)
        elif kind == "shear_x":
            for j in range(px + 1):
                coeff = Fraction(factorial(px), factorial(j) * factorial(px - j))
                out[n - j] += c * coeff * t ** (px - j)
        else:
            raise ValueError(kind)
    return out


def _random_rational(rng: random.Random, nonzero=False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        if q or not nonzero:
            return q


def _random_sl2(rng: random.Random):
    ops = [("shear_y", _random_rational(rng)), ("shear_x", _random_rational(rng)),
           ("scale", _random_rational(rng, nonzero=True)), ("shear_y", _random_rational(rng))]

    def apply(vec):
        for kind, t in ops:
            vec = _act_s5(vec, kind, t)
        return vec
    return apply


BASE_VECTOR = [Fraction(x) for x in (-1, -2, -2, 1, -1, -1)]


def _constraint_matrix(model: PlueckerModel, a) -> list:
    """5 x 6 matrix of b -> constraints(a ^ b)."""
    out = [[Fraction(0)] * 6 for _ in range(5)]
    for r, row in enumerate(model.linear_constraints):
        for k, (i, j) in enumerate(PAIRS):
            c = row[k]
            if c:
                out[r][j - 1] += c * a[i - 1]
                out[r][i - 1] -= c * a[j - 1]
    return out


def sample_point(model: PlueckerModel, rng: random.Random):
    """A decomposable point of Z_0: a = g . a_0 for random g in SL(2), b from the
    exact kernel of the constraint matrix, then alpha from W = a ^ b."""
    a = _random_sl2(rng)(list(BASE_VECTOR))
    ker = nullspace(_constraint_matrix(model, a))
    for _ in range(20):
        coeffs = [_random_rational(rng) for _ in ker]
        b = [sum((c * v[i] for c, v in zip(coeffs, ker)), Fraction(0)) for i in range(6)]
        w = plane_coordinates(a, b)
        if any(w):
            return model.alpha_of(w)
    return None


def generic_rank(model: PlueckerModel, samples: int = 50, seed: int = DEFAULT_SEED, points=None) -> dict:
    """Maximum Jacobian rank over pseudo-random points of Z_0 (or given points)."""
    if samples < 1 and points is None:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    ranks = []
    if points is None:
        for _ in range(samples):
            pt = sample_point(model, rng)
            if pt is None:
                continue
            ranks.append(jacobian_rank(model, pt))
    else:
        ranks = [jacobian_rank(model, pt) for pt in points]
    if not ranks:
        raise RuntimeError("no valid sample found")
    top = max(ranks)
    return {"generic_rank": top, "ranks": ranks, "samples": len(ranks), "seed": seed,
            "non_generic": sum(1 for r in ranks if r < 6)}


def kernel_membership(two_plane, form, mode: str = "invariant") -> bool:
    """Is the plane inside the kernel of the two-form given in the s^4 basis?

    ``form`` has 5 coordinates against the s^4 basis; ``mode`` picks the
    identification of Lambda^2 s^5 with two-forms (invariant pairing or naive).
    """
    a, b = (list(map(Fraction, v)) for v in two_plane)
    if not any(plane_coordinates(a, b)):
        raise ValueError("zero two-plane")
    s4 = _standard_basis().s4
    vec = [sum((Fraction(c) * v[k] for c, v in zip(form, s4)), Fraction(0)) for k in range(15)]
    omega = two_form(vec, mode)
    for u in (a, b):
        # contraction i_u omega as a covector
        cov = [Fraction(0)] * 6
        for k, (i, j) in enumerate(PAIRS):
            cov[j - 1] += omega[k] * u[i - 1]
            cov[i - 1] -= omega[k] * u[j - 1]
        if any(cov):
            return False
    return True


def _unit(i: int, size: int) -> list:
    return [Fraction(int(k == i)) for k in range(size)]


def kernel_checks() -> dict:
    """The singular fixed planes are annihilated by the extreme s^4 forms.

    P = <x^5, x^4y> lies in the kernel of the lowest-weight form s4[4] and
    Q = <xy^4, y^5> in the kernel of the highest-weight form s4[0]; the
    smooth fixed planes lie in no kernel of a basis form.
    """
    p = (_unit(0, 6), _unit(1, 6))
    q = (_unit(4, 6), _unit(5, 6))
    smooth = [(_unit(0, 6), _unit(2, 6)), (_unit(3, 6), _unit(5, 6))]
    forms = [_unit(j, 5) for j in range(5)]
    return {
        "P_in_ker_s4[4]": kernel_membership(p, forms[4]),
        "Q_in_ker_s4[0]": kernel_membership(q, forms[0]),
        "smooth_in_no_basis_kernel": not any(kernel_membership(pl, f) for pl in smooth for f in forms),
    }


@dataclass(frozen=True)
class FixedPoint:
    name: str
    alpha: tuple
    cstar_weight: int
    factors: tuple


def fixed_point_weights(model: PlueckerModel | None = None) -> list:
    """The four torus-fixed points on the divisor at infinity with their H-weights."""
    model = model or build_model()
    specs = [("x^4y∧x^5", (2, 1)), ("x^3y^2∧x^5", (3, 1)),
             ("y^5∧x^2y^3", (6, 4)), ("y^5∧xy^4", (6, 5))]
    out = []
    for name, (i, j) in specs:
        w = wedge((1, i, j))
        alpha = model.alpha_of(w)
        out.append(FixedPoint(name, tuple(alpha), basis_weight(i) + basis_weight(j), (i, j)))
    return out


def _derivation_matrix(op) -> list:
    """15 x 15 matrix of a derivation of s^5 extended to Lambda^2."""
    cols = []
    for i, j in PAIRS:
        v = [Fraction(0)] * 15
        for ii, c in op(i):
            v = [x + y for x, y in zip(v, wedge((c, ii, j)))]
        for jj, c in op(j):
            v = [x + y for x, y in zip(v, wedge((c, i, jj)))]
        cols.append(v)
    return [[cols[c][r] for c in range(15)] for r in range(15)]


def _raise(i):
    return [(i - 1, i - 1)] if i > 1 else []


def _lower(i):
    return [(i + 1, 6 - i)] if i < 6 else []


def equivariance_check(model: PlueckerModel) -> dict:
    """The span of the ideal is stable under X = x d/dy and Y = y d/dx acting on alpha."""
    out = {}
    emb = model.alpha_embedding
    for name, op in (("X", _raise), ("Y", _lower)):
        d = _derivation_matrix(op)
        image = [[sum(d[r][s] * emb[s][k] for s in range(15)) for k in range(10)] for r in range(15)]
        cols = [model.alpha_of([image[r][k] for r in range(15)]) for k in range(10)]
        a_mat = [[cols[k][r] for k in range(10)] for r in range(10)]
        lin = []
        for r in range(10):
            p = ALPHA_RING.zero
            for k in range(10):
                if a_mat[r][k]:
                    p += QQ(a_mat[r][k].numerator, a_mat[r][k].denominator) * ALPHA[k]
            lin.append(p)
        moved = []
        for q in model.ideal:
            moved.append(sum((q.diff(ALPHA[r]) * lin[r] for r in range(10)), ALPHA_RING.zero))
        out[name] = not outside_span(model.ideal, moved)
    return out


def printed_comparison() -> dict:
    """Which printed generators lie in the regenerated span, for both embeddings."""
    printed = printed_ideal()
    res = {}
    for label, typo in (("corrected", False), ("printed_embedding", True)):
        reg = _substitute(_embedding(typo))
        res[label] = {
            "regenerated_rank": span_rank(reg),
            "printed_rank": span_rank(printed),
            "joint_rank": span_rank(reg + printed),
            "printed_outside_span": outside_span(reg, printed),
        }
    return res


def verify_report(samples: int = 50, seed: int = DEFAULT_SEED) -> dict:
    model = build_model()
    fps = []
    for fp in fixed_point_weights(model):
        fps.append({"name": fp.name, "weight": fp.cstar_weight,
                    "on_ideal": not any(model.residuals(fp.alpha)),
                    "jacobian_rank": jacobian_rank(model, fp.alpha)})
    comp = printed_comparison()
    gen = generic_rank(model, samples=samples, seed=seed)
    first = _substitute(_embedding(False))[0]
    return {
        "basis_rank": model.basis.rank(),
        "printed_ideal_match": {
            "exact": not comp["corrected"]["printed_outside_span"]
            and comp["corrected"]["joint_rank"] == comp["corrected"]["regenerated_rank"],
            "detail": comp,
            "first_relation_is_printed_generator": any(first == q or first == -q for q in printed_ideal()),
        },
        "fixed_points": fps,
        "generic_rank": gen["generic_rank"],
        "rank_histogram": {str(r): gen["ranks"].count(r) for r in sorted(set(gen["ranks"]))},
        "samples": gen["samples"],
        "seed": seed,
        "equivariance": equivariance_check(model),
        "kernel_membership": kernel_checks(),
    }
