"""JSON problem files: ring, parameters, charge, bundles and optional blocks.

Scalars are ints or strings ("p/q", or expressions in declared symbolic
parameters such as "-b" or "2*sigma").  Classes are objects mapping monomial
strings ("h^2", "1") to scalars.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import sympy
from sympy import QQ
from sympy.polys.rings import PolyElement, ring as poly_ring

from .charge import ChargeSpec, StabilityVector, preset
from .ring import BundleData, GaussianRational, GradedClass, IntersectionRing, to_scalar

__all__ = ["InputError", "Problem", "load_problem", "resolve_path", "parse_scalar"]


class InputError(ValueError):
    """Schema violation with a JSON path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def resolve_path(name: str) -> Path:
    """A filesystem path, or a bundled example addressed as examples/<name>."""
    p = Path(name)
    if p.exists():
        return p
    base = p.name if p.suffix else p.name + ".json"
    bundled = resources.files("zstab") / "data" / base
    if bundled.is_file():
        return Path(str(bundled))
    raise InputError("$", f"no such problem file {name!r}")


def bundled_examples() -> list:
    return sorted(p.name for p in (resources.files("zstab") / "data").iterdir() if p.name.endswith(".json"))


@dataclass
class _Scalars:
    values: dict
    symbols: tuple
    poly_ring: object = None
    gens: dict = field(default_factory=dict)

    def parse(self, raw, path: str):
        if isinstance(raw, bool) or raw is None:
            raise InputError(path, f"expected a rational, got {raw!r}")
        if isinstance(raw, int):
            return Fraction(raw)
        if isinstance(raw, float):
            raise InputError(path, "floats are not accepted; write rationals as \"p/q\" strings")
        if not isinstance(raw, str):
            raise InputError(path, f"expected a scalar, got {type(raw).__name__}")
        try:
            return to_scalar(raw)
        except (ValueError, ZeroDivisionError):
            pass
        names = {s: sympy.Symbol(s) for s in self.symbols}
        names.update({k: sympy.Rational(v.numerator, v.denominator) for k, v in self.values.items()})
        try:
            expr = sympy.sympify(raw, locals=names)
        except (sympy.SympifyError, TypeError, SyntaxError) as exc:
            raise InputError(path, f"cannot parse scalar {raw!r}: {exc}") from None
        if expr.free_symbols - set(sympy.Symbol(s) for s in self.symbols):
            raise InputError(path, f"unknown symbols in {raw!r}")
        if expr.is_Rational:
            return Fraction(int(expr.p), int(expr.q))
        if self.poly_ring is None:
            raise InputError(path, f"{raw!r} is not rational")
        try:
            return self.poly_ring.from_expr(expr)
        except Exception:
            raise InputError(path, f"{raw!r} is not a polynomial in {list(self.symbols)}") from None


def parse_scalar(raw, path: str = "$"):
    return _Scalars({}, ()).parse(raw, path)


@dataclass
class Problem:
    raw: dict
    ring: IntersectionRing
    scalars: _Scalars
    bundles: dict
    charge: ChargeSpec | None
    source: str = ""

    def cls(self, raw, path: str) -> GradedClass:
        if not isinstance(raw, dict):
            raise InputError(path, "a class is an object {monomial: scalar}")
        coeffs = {}
        for key, val in raw.items():
            try:
                mono = self.ring.monomial(key)
            except ValueError as exc:
                raise InputError(f"{path}.{key}", str(exc)) from None
            coeffs[mono] = coeffs.get(mono, 0) + self.scalars.parse(val, f"{path}.{key}")
        return GradedClass(self.ring, coeffs)

    def scalar(self, raw, path: str):
        return self.scalars.parse(raw, path)

    def bundle(self, name: str, path: str) -> BundleData:
        if name not in self.bundles:
            raise InputError(path, f"unknown bundle {name!r}")
        return self.bundles[name]

    @property
    def symbolic(self) -> bool:
        return bool(self.scalars.symbols)

    def symbol_expr(self, c):
        if isinstance(c, PolyElement):
            return c.as_expr()
        return sympy.Rational(c.numerator, c.denominator)


def _parse_ring(raw, path) -> IntersectionRing:
    if not isinstance(raw, dict):
        raise InputError(path, "missing ring object")
    try:
        gens = [(g[0], int(g[1])) for g in raw["generators"]]
        table = {k: parse_scalar(v, f"{path}.integral_table.{k}") for k, v in raw["integral_table"].items()}
        return IntersectionRing(int(raw["n"]), gens, table)
    except KeyError as exc:
        raise InputError(path, f"missing field {exc.args[0]!r}") from None
    except (TypeError, IndexError) as exc:
        raise InputError(path, f"malformed ring: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(path, str(exc)) from None


def _parse_scalars(raw, overrides: dict) -> _Scalars:
    params = raw.get("parameters", {}) or {}
    if not isinstance(params, dict):
        raise InputError("$.parameters", "expected an object")
    values, symbols = {}, []
    for name, val in params.items():
        if name in overrides:
            values[name] = parse_scalar(overrides[name], f"--set {name}")
        elif val == "symbol":
            symbols.append(name)
        else:
            values[name] = parse_scalar(val, f"$.parameters.{name}")
    for name in overrides:
        if name not in params:
            raise InputError(f"--set {name}", "not a declared parameter")
    sc = _Scalars(values, tuple(symbols))
    if symbols:
        sc.poly_ring, *gens = poly_ring(",".join(symbols), QQ)
        sc.gens = dict(zip(symbols, gens))
    return sc


def _parse_bundle(prob: Problem, raw, path) -> BundleData:
    if not isinstance(raw, dict):
        raise InputError(path, "expected a bundle object")
    try:
        if "ch" in raw:
            return BundleData(prob.cls(raw["ch"], f"{path}.ch"))
        rank = prob.scalar(raw["rank"], f"{path}.rank")
        chern = [None if c is None else prob.cls(c, f"{path}.chern[{i}]")
                 for i, c in enumerate(raw.get("chern", []))]
        b = BundleData.from_chern(prob.ring, rank, chern)
        if "twist" in raw:
            b = b.twist(prob.cls(raw["twist"], f"{path}.twist"))
        return b
    except KeyError as exc:
        raise InputError(path, f"missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(path, str(exc)) from None


def _parse_rho_entry(prob: Problem, raw, path):
    if isinstance(raw, list):
        if len(raw) != 2:
            raise InputError(path, "complex entries are [re, im]")
        return GaussianRational(prob.scalar(raw[0], f"{path}[0]"), prob.scalar(raw[1], f"{path}[1]"))
    return GaussianRational(prob.scalar(raw, path), 0)


def _parse_charge(prob: Problem, raw, path, weak_rho: bool) -> ChargeSpec:
    if not isinstance(raw, dict):
        raise InputError(path, "expected a charge object")
    try:
        omega = prob.cls(raw["omega"], f"{path}.omega")
        if "preset" in raw:
            b_field = prob.cls(raw["b_field"], f"{path}.b_field") if "b_field" in raw else None
            tangent = None
            if "tangent" in raw:
                tangent = [None if c is None else prob.cls(c, f"{path}.tangent[{i}]")
                           for i, c in enumerate(raw["tangent"])]
            return preset(raw["preset"], prob.ring, omega, b_field=b_field, tangent=tangent)
        rho = [_parse_rho_entry(prob, r, f"{path}.rho[{i}]") for i, r in enumerate(raw["rho"])]
        mode = raw.get("validation", "weak" if weak_rho else "strict")
        u = prob.cls(raw["u"], f"{path}.u") if "u" in raw else prob.ring.one()
        return ChargeSpec(StabilityVector(rho, mode=mode), omega, u)
    except KeyError as exc:
        raise InputError(path, f"missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(path, str(exc)) from None


def load_problem(name: str, overrides: dict | None = None, weak_rho: bool = False) -> Problem:
    path = resolve_path(name)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError("$", f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise InputError("$", "top level must be an object")
    ring = _parse_ring(raw.get("ring"), "$.ring")
    scalars = _parse_scalars(raw, overrides or {})
    prob = Problem(raw, ring, scalars, {}, None, source=str(path))
    bundles = raw.get("bundles", {}) or {}
    if not isinstance(bundles, dict):
        raise InputError("$.bundles", "expected an object of named bundles")
    for bname, braw in bundles.items():
        prob.bundles[bname] = _parse_bundle(prob, braw, f"$.bundles.{bname}")
    if "charge" in raw:
        prob.charge = _parse_charge(prob, raw["charge"], "$.charge", weak_rho)
    return prob
