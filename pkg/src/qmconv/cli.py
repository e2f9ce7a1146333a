"""Command-line interface.

Exit codes: 0 success, 1 malformed input or bad flags, 2 indeterminate
detection, 3 inconsistent detection, 4 antihomomorphic convention where a
homomorphic one is required.
"""
from __future__ import annotations

import argparse
import ast
import math
import operator
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import checks
from .detect import DEFAULT_TOL, classify
from .errors import (
    AntihomomorphicHeader,
    Indeterminate,
    NotHomomorphic,
    QmError,
)
from .io import read_dataset, read_probe_table, write_dataset
from .kinematics import Frame, integrate
from .migrate import canonicalize, interface, parse, simplify, to_source, translate
from .migrate.dataset import migrate_dataset
from .quat_core import Quaternion, UnitQuaternion
from .rotvec import ConventionFactors, matrix_to_rotvec, quat_to_rotvec, rotvec_to_matrix, rotvec_to_quat
from .so3 import HAMILTON_CH, SHUSTER_CS, QmConvention, as_rotation, matching_map, matrix_to_quat, quat_to_matrix

EXIT_OK, EXIT_INPUT, EXIT_INDETERMINATE, EXIT_INCONSISTENT, EXIT_ANTIHOMOMORPHIC = range(5)

CONVENTIONS = ("hamilton-ch", "shuster-cs", "hamilton-cs", "shuster-ch")
TARGETS = (HAMILTON_CH.name, SHUSTER_CS.name)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with "indeterminate"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos}


def _eval_number(node) -> float:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_number(node.left), _eval_number(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval_number(node.operand))
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
            and len(node.args) == 1 and not node.keywords):
        return _FUNCS[node.func.id](_eval_number(node.args[0]))
    raise ValueError("unsupported expression")


def parse_numbers(text: str, count: int) -> List[float]:
    """Comma- or semicolon-separated numbers; each may use ``pi``, ``sqrt``, ``sin``, ``cos``."""
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != count:
        raise ValueError(f"expected {count} comma-separated numbers, got {len(parts)}")
    out = []
    for p in parts:
        try:
            v = _eval_number(ast.parse(p, mode="eval").body)
        except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
            raise ValueError(f"cannot read number {p!r}") from None
        if not math.isfinite(v):
            raise ValueError(f"non-finite number {p!r}")
        out.append(v)
    return out


def _fmt(values) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return ", ".join("%.17g" % (float(v) + 0.0) for v in values)


def _die(code: int, message: str) -> int:
    print(f"qmconv: {message}", file=sys.stderr)
    return code


# -- detect ---------------------------------------------------------------

def cmd_detect(args) -> int:
    try:
        with open(args.probe_file, encoding="utf-8") as fh:
            table = read_probe_table(fh)
    except (OSError, QmError) as exc:
        return _die(EXIT_INPUT, str(exc))
    result = classify(table, args.tol)

    def field(value, keys, probed):
        if value is not None:
            return value.value
        for k in keys:
            if k in result.errors:
                return f"unknown ({result.errors[k]})"
        return "unknown (no samples)" if not probed else "unknown"

    print("multiplication:", field(result.multiplication, ("multiplication",), bool(table.product_samples)))
    print("map:", field(result.map, ("map", "q2m", "m2q"), bool(table.q2m_samples or table.m2q_samples)))
    h = result.homomorphic
    print("homomorphic:", "unknown" if h is None else ("yes" if h else "no"))
    if any(not isinstance(e, Indeterminate) for e in result.errors.values()):
        return EXIT_INCONSISTENT
    if result.errors or (result.multiplication is None and result.map is None):
        return EXIT_INDETERMINATE
    return EXIT_OK


# -- migrate --------------------------------------------------------------

def _migrate_tool(args, target: QmConvention) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            tool = parse(fh.read())
        source = QmConvention.from_name(args.source) if args.source else None
    except (OSError, QmError, ValueError) as exc:
        return _die(EXIT_INPUT, str(exc))
    if source is None:
        if tool.multiplication is None:
            return _die(EXIT_INPUT, "tool has no quaternion product; pass --from to name its convention")
        source = QmConvention(matching_map(tool.multiplication), tool.multiplication)
    elif tool.multiplication not in (None, source.mult):
        return _die(EXIT_INPUT, f"tool uses {tool.multiplication.value} products but --from says {source}")
    if not source.is_homomorphic:
        # same map, other multiplication with swapped arguments
        tool = canonicalize(tool)
        source = QmConvention(source.map, source.mult.flipped)
    if source != target:
        tool = translate(tool) if args.method == "translate" else interface(tool)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(to_source(simplify(tool)) + "\n")
    return EXIT_OK


def cmd_migrate(args) -> int:
    target = QmConvention.from_name(args.to)
    if args.tool:
        return _migrate_tool(args, target)
    try:
        with open(args.input, encoding="utf-8") as fh:
            ds = read_dataset(fh)
    except (OSError, QmError) as exc:
        return _die(EXIT_INPUT, str(exc))
    try:
        out = migrate_dataset(ds, target)
    except AntihomomorphicHeader as exc:
        return _die(EXIT_ANTIHOMOMORPHIC, str(exc))
    with open(args.output, "w", encoding="utf-8") as fh:
        write_dataset(out, fh)
    return EXIT_OK


# -- convert --------------------------------------------------------------

_SIZES = {"quat": 4, "matrix": 9, "rotvec": 3}


def _convert(kind_from, kind_to, conv: QmConvention, f: ConventionFactors, values):
    if kind_from == "quat":
        if kind_to == "quat":
            return Quaternion(*values)
        q = UnitQuaternion(*values)
        if kind_to == "matrix":
            return quat_to_matrix(conv.map, q)
        return quat_to_rotvec(conv, f, q)
    if kind_from == "matrix":
        c = as_rotation(np.array(values).reshape(3, 3))
        if kind_to == "quat":
            return matrix_to_quat(conv.map, c)
        if kind_to == "matrix":
            return c
        return matrix_to_rotvec(f, c)
    phi = np.array(values)
    if kind_to == "quat":
        return rotvec_to_quat(conv, f, phi)
    if kind_to == "matrix":
        return rotvec_to_matrix(f, phi)
    return phi


def cmd_convert(args) -> int:
    conv = QmConvention.from_name(args.conv)
    if "rotvec" in (args.source, args.target) and not conv.is_homomorphic:
        return _die(EXIT_ANTIHOMOMORPHIC, f"rotation vectors need a homomorphic convention, not {conv}")
    try:
        values = parse_numbers(args.value, _SIZES[args.source])
        out = _convert(args.source, args.target, conv, ConventionFactors(args.alphaC, args.alphaPhi), values)
    except NotHomomorphic as exc:
        return _die(EXIT_ANTIHOMOMORPHIC, str(exc))
    except (QmError, ValueError) as exc:
        return _die(EXIT_INPUT, str(exc))
    if isinstance(out, Quaternion):
        print(_fmt(out))
    elif np.ndim(out) == 2:
        for row in out:
            print(_fmt(row))
    else:
        print(_fmt(out))
    return EXIT_OK


# -- integrate ------------------------------------------------------------

def cmd_integrate(args) -> int:
    conv = QmConvention.from_name(args.conv)
    try:
        omega = tuple(parse_numbers(args.omega, 3))
        q0 = UnitQuaternion(*parse_numbers(args.q0, 4))
        t_end = parse_numbers(args.t, 1)[0]
        dt = parse_numbers(args.dt, 1)[0]
        traj = integrate(conv, ConventionFactors(args.alphaC, 1), q0, lambda t: omega,
                         t_end, dt, Frame(args.frame))
    except NotHomomorphic as exc:
        return _die(EXIT_ANTIHOMOMORPHIC, str(exc))
    except (QmError, ValueError) as exc:
        return _die(EXIT_INPUT, str(exc))
    if args.out == "-":
        traj.write_csv(sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            traj.write_csv(fh)
    t, q, c = traj.final
    # keep stdout pure CSV when the trajectory goes there
    summary = sys.stderr if args.out == "-" else sys.stdout
    print(f"steps: {len(traj) - 1}", file=summary)
    print(f"t: {'%.17g' % t}", file=summary)
    print(f"q: {_fmt(q)}", file=summary)
    for row in c:
        print(f"C: {_fmt(row)}", file=summary)
    return EXIT_OK


# -- check ----------------------------------------------------------------

def cmd_check(args) -> int:
    groups = [g for item in args.group or [] for g in item.split(",") if g]
    try:
        report = checks.run(args.seed, groups)
    except KeyError as exc:
        return _die(EXIT_INPUT, f"{exc.args[0]}; known groups: {', '.join(checks.GROUPS)}")
    all_ok = True
    for name, results in report.items():
        ok = all(r[1] for r in results)
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name} ({len(results)} checks)")
        for label, passed, worst in results:
            if args.verbose or not passed:
                extra = "" if worst is None else f" worst={worst:.3g}"
                print(f"    {'ok ' if passed else 'BAD'} {label}{extra}")
    return EXIT_OK if all_ok else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmconv", description="Quaternion convention detection, migration and conversion.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("detect", help="identify the convention behind a probe file")
    d.add_argument("probe_file")
    d.add_argument("--tol", type=float, default=DEFAULT_TOL)
    d.set_defaults(func=cmd_detect)

    m = sub.add_parser("migrate", help="re-express a dataset (or a tool with --tool) in another convention")
    m.add_argument("input")
    m.add_argument("--to", required=True, choices=TARGETS)
    m.add_argument("output")
    m.add_argument("--tool", action="store_true", help="input is an expression file, not a dataset")
    m.add_argument("--from", dest="source", choices=CONVENTIONS,
                   help="tool source convention (default: inferred from its products)")
    m.add_argument("--method", choices=("translate", "interface"), default="translate")
    m.set_defaults(func=cmd_migrate)

    c = sub.add_parser("convert", help="convert between quaternion, matrix and rotation vector")
    c.add_argument("--from", dest="source", required=True, choices=tuple(_SIZES))
    c.add_argument("--to", dest="target", required=True, choices=tuple(_SIZES))
    c.add_argument("--conv", default="hamilton-ch", choices=CONVENTIONS)
    c.add_argument("--alphaC", type=int, default=1, choices=(1, -1))
    c.add_argument("--alphaPhi", type=int, default=1, choices=(1, -1))
    c.add_argument("value", help="comma-separated components; a matrix is given row-major")
    c.set_defaults(func=cmd_convert)

    i = sub.add_parser("integrate", help="RK4 attitude integration under constant angular velocity")
    i.add_argument("--conv", default="hamilton-ch", choices=CONVENTIONS)
    i.add_argument("--alphaC", type=int, default=1, choices=(1, -1))
    i.add_argument("--frame", default="A", choices=("A", "B"))
    i.add_argument("--omega", required=True)
    i.add_argument("--t", required=True)
    i.add_argument("--dt", default="1e-3")
    i.add_argument("--q0", default="1,0,0,0")
    i.add_argument("--out", required=True, help="CSV path, or - for stdout")
    i.set_defaults(func=cmd_integrate)

    k = sub.add_parser("check", help="run the built-in identity suite")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--group", action="append", help="group name(s), comma-separated or repeated")
    k.add_argument("-v", "--verbose", action="store_true")
    k.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
