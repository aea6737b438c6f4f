"""Command-line frontend.  Every subcommand prints one JSON report.

Exit codes: 0 computed, 1 a stability or identity check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
from fractions import Fraction

import sympy
from sympy.polys.rings import PolyElement

from . import fibration as fib
from . import pluecker, sl2
from .charge import central_charge
from .grr import EmbeddedSubmanifold, cy_anomaly_check, cy_divisor_discrepancy, pushforward_ch_structure_sheaf
from .problem import InputError, Problem, load_problem
from .ring import BundleData, GaussianRational
from .stability import ChargeFamily, asym_stable, comparison_polynomial, fmt, wall_scan
from .surface import surface_report

__all__ = ["main", "build_parser"]


class CheckFailed(Exception):
    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


def _gauss_json(z: GaussianRational) -> dict:
    return {"re": fmt(z.re), "im": fmt(z.im)}


def _expr(c):
    if isinstance(c, PolyElement):
        return c.as_expr()
    return sympy.Rational(c.numerator, c.denominator)


def charge_string(coeffs) -> str:
    k = sympy.Symbol("k")
    total = sum((_expr(c.re) + sympy.I * _expr(c.im)) * k ** d for d, c in enumerate(coeffs))
    return str(sympy.expand(total))


def _require(prob: Problem, key: str):
    if key not in prob.raw:
        raise InputError(f"$.{key}", "missing field")
    return prob.raw[key]


def _charge(prob: Problem):
    if prob.charge is None:
        raise InputError("$.charge", "missing field")
    return prob.charge


def _main_pair(prob: Problem):
    e = prob.bundle(_require(prob, "bundle"), "$.bundle")
    subs = _require(prob, "subobjects")
    if not isinstance(subs, list):
        raise InputError("$.subobjects", "expected a list of bundle names")
    fs = [prob.bundle(name, f"$.subobjects[{i}]") for i, name in enumerate(subs)]
    return e, fs


def _dual_pair(e: BundleData, fs: list):
    """E* with the kernels of E* -> F* as subobjects."""
    ed = e.dual()
    return ed, [ed - f.dual() for f in fs]


def cmd_charge(prob: Problem, args) -> dict:
    spec = _charge(prob)
    out = {}
    for name, b in prob.bundles.items():
        z = central_charge(spec, b)
        out[name] = {"coefficients": [_gauss_json(c) for c in z.coefficients],
                     "polynomial": charge_string(z.coefficients)}
    return {"source": prob.source, "bundles": out}


def _stability_block(spec, e, fs, names):
    try:
        rep = asym_stable(spec, e, fs)
    except TypeError:
        z_e = central_charge(spec, e)
        comps = []
        for name, f in zip(names, fs):
            s = comparison_polynomial(central_charge(spec, f), z_e)
            comps.append({"subobject": name, "comparison": [fmt(c) for c in s]})
        return {"aggregate": "undetermined (symbolic parameters; use --set)", "comparisons": comps}, False
    data = rep.to_json()
    for v, name in zip(data["verdicts"], names):
        v["subobject"] = name
    return data, rep.aggregate == "Unstable"


def cmd_stability(prob: Problem, args) -> dict:
    spec = _charge(prob)
    e, fs = _main_pair(prob)
    names = list(prob.raw["subobjects"])
    out, failed = {}, False
    out["bundle"], bad = _stability_block(spec, e, fs, names)
    failed |= bad
    if prob.raw.get("dual"):
        ed, ks = _dual_pair(e, fs)
        out["dual"], bad = _stability_block(spec, ed, ks, [f"ker(E*->{n}*)" for n in names])
        failed |= bad
    if failed:
        raise CheckFailed(out)
    return out


def _family(prob: Problem) -> ChargeFamily:
    raw = _require(prob, "family")
    spec = _charge(prob)
    kind = raw.get("kind")
    if kind == "b_pencil":
        direction = prob.cls(raw.get("direction"), "$.family.direction")
    elif kind == "rho_pencil":
        d = raw.get("direction")
        if not isinstance(d, list) or len(d) != 2:
            raise InputError("$.family.direction", "rho_pencil direction is [re, im]")
        direction = GaussianRational(prob.scalar(d[0], "$.family.direction[0]"),
                                     prob.scalar(d[1], "$.family.direction[1]"))
    else:
        raise InputError("$.family.kind", f"unknown family kind {kind!r}")
    try:
        return ChargeFamily(spec, kind, direction, index=int(raw.get("index", 0)))
    except ValueError as exc:
        raise InputError("$.family", str(exc)) from None


def cmd_walls(prob: Problem, args) -> dict:
    if prob.symbolic:
        raise InputError("$.parameters", "wall scans need numeric parameters; use --set")
    fam = _family(prob)
    e, fs = _main_pair(prob)
    names = list(prob.raw["subobjects"])
    rng = prob.raw["family"].get("range", [None, None])
    t_range = tuple(None if x is None else prob.scalar(x, "$.family.range") for x in rng)
    out = {"family": prob.raw["family"]["kind"], "bundle": []}
    for name, res in zip(names, wall_scan(fam, e, fs, t_range)):
        out["bundle"].append(dict(res, subobject=name))
    if prob.raw.get("dual"):
        ed, ks = _dual_pair(e, fs)
        out["dual"] = [dict(res, subobject=f"ker(E*->{n}*)") for n, res in zip(names, wall_scan(fam, ed, ks, t_range))]
    return out


def cmd_surface(prob: Problem, args) -> dict:
    if prob.symbolic:
        raise InputError("$.parameters", "surface reports need numeric parameters; use --set")
    spec = _charge(prob)
    l = prob.bundle(_require(prob, "line_bundle"), "$.line_bundle")
    curves = [(c.get("name", f"curve{i}"), prob.cls(c.get("class"), f"$.curves[{i}].class"))
              for i, c in enumerate(prob.raw.get("curves", []))]
    try:
        rep = surface_report(spec, l, curves, at_k=args.at_k)
    except ValueError as exc:
        raise InputError("$", str(exc)) from None
    if rep["verdict"] != "Holds":
        raise CheckFailed(rep)
    return rep


def _submanifold(prob: Problem, raw, path) -> EmbeddedSubmanifold:
    try:
        klass = prob.cls(raw["class"], f"{path}.class") if "class" in raw else None
        degs = {k: prob.scalar(v, f"{path}.restriction_degrees.{k}")
                for k, v in raw["restriction_degrees"].items()}
        return EmbeddedSubmanifold(prob.ring, int(raw["dim"]), degs,
                                   deg_KX_restricted=prob.scalar(raw.get("deg_KX_restricted", 0), path),
                                   deg_KC=raw.get("deg_KC"), genus=raw.get("genus"), klass=klass)
    except KeyError as exc:
        raise InputError(path, f"missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(path, str(exc)) from None


def cmd_grr(prob: Problem, args) -> dict:
    spec = _charge(prob)
    out, failed = [], False
    for i, raw in enumerate(_require(prob, "submanifolds")):
        path = f"$.submanifolds[{i}]"
        sub = _submanifold(prob, raw, path)
        entry = {"name": raw.get("name", f"sub{i}"), "class_check": sub.check_class()}
        failed |= not entry["class_check"]
        for check in raw.get("checks", []):
            try:
                if check == "pushforward":
                    f = pushforward_ch_structure_sheaf(sub)
                    entry["pushforward"] = {"correction": fmt(f.correction),
                                            "pairing_with_1": fmt(f(prob.ring.one()))}
                elif check == "anomaly":
                    rows = []
                    for bname, b in prob.bundles.items():
                        r = cy_anomaly_check(b, sub, raw.get("ambient_kind", ""), spec=spec)
                        rows.append({"bundle": bname, "equal": r["equal"],
                                     "lhs": [_gauss_json(z) for z in r["lhs"]]})
                        failed |= not r["equal"]
                    entry["anomaly"] = rows
                elif check == "divisor":
                    rows = []
                    for bname, b in prob.bundles.items():
                        r = cy_divisor_discrepancy(sub, spec, b, at_k=args.at_k)
                        rows.append({"bundle": bname, "mismatch": _gauss_json(r["mismatch"])})
                    entry["divisor"] = {"universal_coefficient": fmt(r["universal_coefficient"]),
                                        "k_squared": fmt(r["k_squared"]),
                                        "discrepancy": fmt(r["discrepancy"]), "mismatch": rows}
                else:
                    raise InputError(f"{path}.checks", f"unknown check {check!r}")
            except ValueError as exc:
                if isinstance(exc, InputError):
                    raise
                raise InputError(path, str(exc)) from None
        out.append(entry)
    rep = {"submanifolds": out}
    if failed:
        raise CheckFailed(rep)
    return rep


_SL2_FUNCS = {
    "wedge2": lambda a: sl2.decompose_product("wedge2", a),
    "sym2": lambda a: sl2.decompose_product("sym2", a),
    "tensor": lambda a, b: sl2.decompose_product("tensor", a, b),
    "gl": sl2.gl,
    "sl": sl2.sl,
}


def eval_sl2(text: str):
    """Evaluate expressions such as ``wedge2(s5)``, ``s4*s2``, ``2*s8+s0`` or ``deform(v22)``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise InputError("$expr", f"cannot parse {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Name):
            if node.id.startswith("s") and node.id[1:].isdigit():
                return sl2.s(int(node.id[1:]))
            if node.id in sl2.MODELS:
                return node.id
            raise InputError("$expr", f"unknown name {node.id!r}")
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Mult, ast.Sub)):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return sl2.rep_subtract(a, b)
            if isinstance(a, int):
                return a * b
            if isinstance(b, int):
                return b * a
            return a * b
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            name = node.func.id
            argv = [ev(x) for x in node.args]
            if name == "deform":
                return sl2.deformation_space(argv[0])
            if name in _SL2_FUNCS:
                return _SL2_FUNCS[name](*argv)
            raise InputError("$expr", f"unknown function {name!r}")
        raise InputError("$expr", f"unsupported syntax in {text!r}")

    return ev(tree)


def cmd_sl2(args) -> dict:
    res = eval_sl2(args.expr)
    if isinstance(res, dict):
        return {k: v for k, v in res.items() if k != "rep"}
    if isinstance(res, sl2.VirtualSl2Rep):
        return {"input": args.expr, "result": str(res), "effective": res.effective, "dimension": res.dimension}
    if isinstance(res, sl2.Sl2Rep):
        return {"input": args.expr, "result": str(res), "dimension": res.dimension}
    raise InputError("$expr", "expression does not evaluate to a representation")


def cmd_pluecker(args) -> dict:
    if args.action != "verify":
        raise InputError("$action", f"unknown pluecker action {args.action!r}")
    return pluecker.verify_report(samples=args.samples, seed=args.seed)


def _fib_row(r: dict) -> dict:
    out = {"rE": r["rE"], "rF": r["rF"], "A": str(r["A"]), "closed_form": str(r["closed_form"]),
           "B": fmt(r["B"]), "match": r["match"],
           "ratio_A_to_closed": None if r["ratio_A_to_closed"] is None else fmt(r["ratio_A_to_closed"]),
           "w1_prefactor": fmt(r["w1_prefactor"])}
    if "A_value" in r:
        out["A_value"] = fmt(r["A_value"])
        out["closed_value"] = fmt(r["closed_value"])
    return out


def cmd_fibration(args) -> dict:
    if args.action == "check":
        if args.rE is None or args.rF is None:
            raise InputError("--rE/--rF", "both ranks are required")
        try:
            d = fib.ProjBundleDegeneration(args.rE, args.rF, d_e=args.dE, d_f=args.dF)
        except ValueError as exc:
            raise InputError("--rE/--rF", str(exc)) from None
        row = _fib_row(fib.a_identity_check(d))
        if not row["match"]:
            raise CheckFailed(row)
        return row
    if args.action == "sweep":
        rows = [_fib_row(r) for r in fib.sweep(args.max_rE)]
        return {"rows": rows, "all_match": all(r["match"] for r in rows)}
    raise InputError("$action", f"unknown fibration action {args.action!r}")


def cmd_selftest(args) -> dict:
    from .acceptance import run_all
    results = run_all(seed=args.seed)
    rep = {"criteria": [r.to_json() for r in results], "all_passed": all(r.ok for r in results)}
    if not rep["all_passed"]:
        raise CheckFailed(rep)
    return rep


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--at-k", type=_rational, default=Fraction(1), help="scale k for pointwise checks")
    common.add_argument("--seed", type=int, default=pluecker.DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=50)
    common.add_argument("--weak-rho", action="store_true", help="weak validation for explicit rho")
    common.add_argument("--json-out", metavar="PATH", help="also write the report to PATH")
    common.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                        help="fix a declared parameter")

    parser = argparse.ArgumentParser(prog="zstab", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("charge", "stability", "walls", "surface", "grr"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="problem JSON (or examples/<name> for a bundled file)")
    p = sub.add_parser("sl2", parents=[common])
    p.add_argument("expr")
    p = sub.add_parser("pluecker", parents=[common])
    p.add_argument("action", choices=["verify"])
    p = sub.add_parser("fibration", parents=[common])
    p.add_argument("action", choices=["check", "sweep"])
    p.add_argument("--rE", type=int)
    p.add_argument("--rF", type=int)
    p.add_argument("--dE", type=_rational)
    p.add_argument("--dF", type=_rational)
    p.add_argument("--max-rE", type=int, default=8)
    sub.add_parser("selftest", parents=[common])
    return parser


_FILE_COMMANDS = {
    "charge": cmd_charge,
    "stability": cmd_stability,
    "walls": cmd_walls,
    "surface": cmd_surface,
    "grr": cmd_grr,
}


def _overrides(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise InputError("--set", f"expected NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _emit(report: dict, args, stream) -> None:
    text = json.dumps(report, indent=2)
    print(text, file=stream)
    if getattr(args, "json_out", None):
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command in _FILE_COMMANDS:
            prob = load_problem(args.input, _overrides(args.set), weak_rho=args.weak_rho)
            report = _FILE_COMMANDS[args.command](prob, args)
        elif args.command == "sl2":
            report = cmd_sl2(args)
        elif args.command == "pluecker":
            report = cmd_pluecker(args)
        elif args.command == "fibration":
            report = cmd_fibration(args)
        else:
            report = cmd_selftest(args)
    except InputError as exc:
        _emit({"error": str(exc)}, args, stdout)
        return 2
    except CheckFailed as exc:
        _emit(exc.report, args, stdout)
        return 1
    _emit(report, args, stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
