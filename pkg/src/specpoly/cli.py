"""Command-line front end.

Exit codes: 0 success, 1 an inequality was violated, 2 invalid input,
3 eigensolver failure.  Defaults can be set through ``SPECPOLY_LEVELS``,
``SPECPOLY_TOL``, ``SPECPOLY_WORKERS`` and ``SPECPOLY_FORMAT``; flags win.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import closedform
from .eigensolve import DEFAULT_TOL, EigensolverError, solve_mixed
from .geometry import (
    BoundaryCondition,
    GeometryError,
    RightTrapezoidParams,
    ShapeSpec,
    TrapezoidParams,
    TriangleParams,
    equilateral,
    rectangle,
    right_trapezoid_from_params,
    right_triangle,
    trapezoid_from_params,
    triangle_from_params,
)
from .mesh import MAX_LEVEL, triangulate
from .verify import checks, families
from .verify.minimize import SEARCH_LEVELS, SPACES, minimize_functional
from .verify.report import VIOLATED, fmt

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3

log = logging.getLogger("specpoly")


class InputError(ValueError):
    """Invalid command-line configuration (exit code 2)."""


# -- argument parsing helpers ------------------------------------------------

def parse_levels(text: str) -> tuple:
    """``"3..6"`` or ``"3,4,5,6"`` -> ``(3, 4, 5, 6)``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            levels = tuple(range(int(lo), int(hi) + 1))
        else:
            levels = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse levels {text!r}; use e.g. 3..6 or 3,4,5,6") from None
    if not levels or min(levels) < 0 or max(levels) > MAX_LEVEL:
        raise InputError(f"levels must lie in [0, {MAX_LEVEL}], got {text!r}")
    return levels


def parse_tol(text) -> float:
    try:
        tol = float(text)
    except ValueError:
        raise InputError(f"cannot parse tolerance {text!r}") from None
    if not 0 < tol <= 1e-3:
        raise InputError("tolerance must lie in (0, 1e-3]")
    return tol


def parse_kv(text: str, required=(), optional=()) -> dict:
    """``"m=4,s=3,alpha=1.3"`` -> ``{"m": 4.0, ...}`` with key validation."""
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in (*required, *optional):
            raise InputError(f"bad parameter {part!r}; expected keys {', '.join((*required, *optional))}")
        try:
            out[key] = float(val)
        except ValueError:
            raise InputError(f"parameter {key} is not a number: {val!r}") from None
    missing = [k for k in required if k not in out]
    if missing:
        raise InputError(f"missing parameter(s) {', '.join(missing)}")
    return out


def parse_grid(text: str) -> tuple:
    try:
        a, b = map(int, text.lower().split("x"))
    except ValueError:
        raise InputError(f"cannot parse grid {text!r}; use e.g. 10x10") from None
    if a < 1 or b < 1:
        raise InputError(f"grid sizes must be positive, got {text!r}")
    return a, b


def parse_pair(text: str, sep: str = "x") -> tuple:
    try:
        a, b = text.lower().split(sep)
        return float(a), float(b)
    except ValueError:
        raise InputError(f"cannot parse {text!r}; use e.g. 2{sep}1") from None


def triangle_params(text: str) -> TriangleParams:
    kv = parse_kv(text, ("m", "s", "alpha"), ("ell", "area"))
    return TriangleParams(kv["m"], kv["s"], kv["alpha"], kv.get("ell"), kv.get("area"))


def shape_from_args(args) -> ShapeSpec:
    """Build the shape selected by exactly one of the shape options."""
    given = [name for name in ("triangle", "right_triangle", "equilateral", "rect", "trapezoid",
                               "right_trapezoid", "shape") if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise InputError("give exactly one shape option (--triangle, --right-triangle, --equilateral, --rect, "
                         "--trapezoid, --right-trapezoid or --shape FILE)")
    which = given[0]
    value = getattr(args, which)
    if which == "triangle":
        return triangle_from_params(triangle_params(value))
    if which == "right_triangle":
        return right_triangle(*parse_pair(value, ","))
    if which == "equilateral":
        return equilateral(float(value))
    if which == "rect":
        return rectangle(*parse_pair(value))
    if which == "trapezoid":
        kv = parse_kv(value, ("p1", "p2", "h"), ("offset",))
        return trapezoid_from_params(TrapezoidParams(kv["p1"], kv["p2"], kv["h"], kv.get("offset")))
    if which == "right_trapezoid":
        kv = parse_kv(value, ("l1", "l2", "h"))
        return right_trapezoid_from_params(RightTrapezoidParams(kv["l1"], kv["l2"], kv["h"]))
    try:
        with open(value, encoding="utf-8") as fh:
            return ShapeSpec.from_json(fh.read())
    except OSError as e:
        raise InputError(f"cannot read shape file {value!r}: {e.strerror}") from None
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise InputError(f"malformed shape file {value!r}: {e}") from None


def _add_shape_options(p, required=False):
    g = p.add_argument_group("shape")
    g.add_argument("--triangle", metavar="m=,s=,alpha=", help="two sides and the angle between them (radians)")
    g.add_argument("--right-triangle", metavar="A,B", help="right triangle with legs A and B")
    g.add_argument("--equilateral", metavar="SIDE")
    g.add_argument("--rect", metavar="AxB", help="A (x) by B (y) rectangle")
    g.add_argument("--trapezoid", metavar="p1=,p2=,h=[,offset=]")
    g.add_argument("--right-trapezoid", metavar="l1=,l2=,h=")
    g.add_argument("--shape", metavar="FILE", help="shape JSON document")


def _add_common(p, default_format, formats=("json", "csv")):
    env_format = os.environ.get("SPECPOLY_FORMAT")
    p.add_argument("--format", choices=formats, default=env_format if env_format in formats else default_format)
    p.add_argument("--out", metavar="PATH", help="write the result here instead of stdout")
    p.add_argument("--figure", metavar="PATH", help="also render a figure (format from the suffix)")


def _add_solver(p, default_levels="3..6"):
    env = os.environ
    p.add_argument("--levels", default=env.get("SPECPOLY_LEVELS", default_levels))
    p.add_argument("--tol", default=env.get("SPECPOLY_TOL", str(DEFAULT_TOL)))
    p.add_argument("--workers", type=int, default=int(env.get("SPECPOLY_WORKERS", "1")))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specpoly", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="extrapolated eigenvalues of one mixed problem")
    _add_shape_options(p)
    p.add_argument("--dirichlet", default="", metavar="LABELS", help="comma-separated Dirichlet sides")
    p.add_argument("--k", type=int, default=1)
    _add_solver(p)
    _add_common(p, "json")

    p = sub.add_parser("verify", help="check one inequality over a shape family")
    p.add_argument("theorem", help=f"one of {', '.join(checks.THEOREMS)}")
    p.add_argument("--grid", default="10x10", help="grid size NxM")
    p.add_argument("--area", type=float)
    p.add_argument("--alpha", type=float, help="smallest angle for thm3 (radians)")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=float, default=2.0, help="trapezoid mean width (thm8)")
    p.add_argument("--h", type=float, default=1.0, help="trapezoid height (thm8)")
    p.add_argument("--n", type=int, default=10, help="family size for thm5, aspect count for thm9")
    _add_shape_options(p)
    _add_solver(p)
    _add_common(p, "csv")

    p = sub.add_parser("sweep", help="eigenvalues over a shape family as a table")
    p.add_argument("--family", choices=sorted(families.FAMILIES), default="triangles")
    p.add_argument("--dirichlet", default="", metavar="LABELS")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--grid", default="10x10")
    p.add_argument("--area", type=float)
    _add_solver(p)
    _add_common(p, "csv")

    p = sub.add_parser("minimize", help="search the minimizer of an eigenvalue at fixed area")
    p.add_argument("--family", choices=sorted(SPACES), default="triangles")
    p.add_argument("--functional", default="lambda1-MS")
    p.add_argument("--area", type=float, default=0.5)
    _add_solver(p, ",".join(map(str, SEARCH_LEVELS)))
    _add_common(p, "json")

    p = sub.add_parser("closed-form", help="evaluate exact formulas")
    p.add_argument("op", choices=("rect", "M", "x", "cylinder", "polya", "bounds"))
    p.add_argument("values", nargs="*", help="rect: A B PX PY COUNT; M: X; x: Y; cylinder: ELL H; polya: K H M")
    p.add_argument("--triangle", metavar="m=,s=,alpha=", help="for bounds")
    _add_common(p, "text", ("text", "json", "csv"))

    p = sub.add_parser("mesh-dump", help="write a mesh as plain-text node and element lists")
    _add_shape_options(p)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--dirichlet", default="", metavar="LABELS", help="highlighted in --figure")
    _add_common(p, "text", ("text", "json", "csv"))
    return parser


# -- output ------------------------------------------------------------------

def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, args):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, default=float)


# -- subcommands -------------------------------------------------------------

def run_solve(args) -> int:
    shape = shape_from_args(args)
    levels, tol = parse_levels(args.levels), parse_tol(args.tol)
    if args.k < 1:
        raise InputError("--k must be >= 1")
    # reject unknown labels before any work
    BoundaryCondition.of(args.dirichlet).validate(shape.labels)
    sp = solve_mixed(shape, args.dirichlet, args.k, levels, tol)
    if args.format == "json":
        _emit(sp.to_json(), args)
    else:
        header = ["k", "value", "error"] + [f"level_{lv}" for lv in sp.levels]
        rows = [[i + 1, float(sp.values[i]), float(sp.errors[i])] + [float(v) for v in sp.per_level[:, i]]
                for i in range(len(sp.values))]
        _emit(_rows_to_csv(header, rows), args)
    if args.figure:
        from .figures import plot_convergence
        plot_convergence(sp, args.figure)
    return EXIT_OK


def _verify_report(args):
    levels, tol = parse_levels(args.levels), parse_tol(args.tol)
    opts = checks.SolverOptions(levels=levels, tol=tol, workers=max(1, args.workers))
    thm = args.theorem
    n1, n2 = parse_grid(args.grid)
    if thm in ("thm4", "thm6", "open2"):
        fam = families.triangles_fixed_area(args.area or 0.5, n1, n2)
        fn = {"thm4": checks.check_thm4, "thm6": checks.check_thm6, "open2": checks.explore_open_problem2}[thm]
        return fn(fam, opts)
    if thm == "thm5":
        return checks.check_thm5(families.right_triangles(args.area or 0.5, args.n), opts)
    if thm == "thm3":
        alpha = 0.6 if args.alpha is None else args.alpha
        try:
            return checks.check_thm3_ordering(alpha, opts, args.area or 0.5)
        except ValueError as e:
            raise InputError(str(e)) from None
    if thm == "thm8":
        if not (args.k >= 1 and args.m > 0 and args.h > 0):
            raise InputError("thm8 needs k >= 1 and positive m, h")
        if args.h * args.k > args.m:
            raise InputError(f"hypothesis h/m <= 1/k violated: h/m = {args.h / args.m:.6g} > 1/k = {1 / args.k:.6g}")
        return checks.check_thm8(families.trapezoids(args.m, args.h, n1, n2), args.k, opts)
    if thm == "thm9":
        return checks.check_thm9(families.right_trapezoids(args.area or 1.0, n_aspect=args.n), opts)
    if thm == "symmetrization":
        return checks.check_symmetrization(shape_from_args(args), opts)
    raise InputError(f"unknown theorem {thm!r}; expected one of {', '.join(checks.THEOREMS)}")


def run_verify(args) -> int:
    report = _verify_report(args)
    _emit(report.to_json() if args.format == "json" else report.to_csv(), args)
    if args.figure:
        from .figures import plot_report
        plot_report(report, args.figure)
    failed = [inst for inst in report.instances if "solver_failure" in inst.flags]
    if failed:
        log.error("%d instance(s) failed to solve: %s", len(failed), failed[0].flags["solver_failure"])
        return EXIT_SOLVER
    return EXIT_VIOLATED if report.verdict == VIOLATED else EXIT_OK


def run_sweep(args) -> int:
    levels, tol = parse_levels(args.levels), parse_tol(args.tol)
    if args.k < 1:
        raise InputError("--k must be >= 1")
    n1, n2 = parse_grid(args.grid)
    name = args.family
    if name == "triangles":
        fam = families.triangles_fixed_area(args.area or 0.5, n1, n2)
    elif name == "right-triangles":
        fam = families.right_triangles(args.area or 0.5, n1)
    elif name == "trapezoids":
        fam = families.trapezoids(n_taper=n1, n_shift=n2)
    else:
        fam = families.right_trapezoids(args.area or 1.0, n_aspect=n2)
    items = list(fam)
    BoundaryCondition.of(args.dirichlet).validate(items[0][1].labels)
    opts = checks.SolverOptions(levels, tol, max(1, args.workers))
    spectra = checks._map(lambda it: solve_mixed(it[1], args.dirichlet, args.k, levels, tol), items, opts)
    keys = list(items[0][0])
    header = keys + ["area"] + [f"lambda_{i + 1}" for i in range(args.k)] + [f"error_{i + 1}" for i in range(args.k)]
    rows = []
    for (params, shape), sp in zip(items, spectra):
        rows.append([params[k] for k in keys] + [shape.area] + [float(v) for v in sp.values]
                    + [float(e) for e in sp.errors])
    if args.format == "csv":
        _emit(_rows_to_csv(header, rows), args)
    else:
        _emit(_json({"family": name, "dirichlet": args.dirichlet, "levels": list(levels),
                     "rows": [dict(zip(header, r)) for r in rows]}), args)
    if args.figure:
        from .figures import plot_sweep
        varying = [k for k in keys if len({p[k] for p, _ in items}) > 1]
        if len(varying) == 1:
            x, xlabel = [p[varying[0]] for p, _ in items], varying[0]
        else:
            x, xlabel = list(range(len(items))), "instance"
        cols = {f"lambda_{i + 1}": [float(sp.values[i]) for sp in spectra] for i in range(args.k)}
        errs = {f"lambda_{i + 1}": [float(sp.errors[i]) for sp in spectra] for i in range(args.k)}
        plot_sweep(x, cols, xlabel=xlabel, path=args.figure, errors=errs)
    return EXIT_OK


def run_minimize(args) -> int:
    levels, tol = parse_levels(args.levels), parse_tol(args.tol)
    try:
        rep = minimize_functional(args.family, args.functional, args.area, levels, tol)
    except ValueError as e:
        raise InputError(str(e)) from None
    if args.format == "json":
        _emit(rep.to_json(), args)
    else:
        dkeys = list(rep.restarts[0]["descriptors"])
        header = ["restart", "value", "nfev", "converged"] + [f"x{i}" for i in range(len(rep.best_x))] + dkeys
        rows = [[i, r["value"], r["nfev"], r["converged"]] + r["x"] + [r["descriptors"][k] for k in dkeys]
                for i, r in enumerate(rep.restarts)]
        _emit(_rows_to_csv(header, rows), args)
    if args.figure:
        from .figures import plot_trace
        plot_trace(rep, args.figure)
    return EXIT_OK


def _numbers(values, n, usage):
    if len(values) != n:
        raise InputError(f"expected {usage}")
    try:
        return [float(v) for v in values]
    except ValueError:
        raise InputError(f"expected numbers: {usage}") from None


def run_closed_form(args) -> int:
    op, vals = args.op, args.values
    if op == "rect":
        if len(vals) != 5:
            raise InputError("usage: closed-form rect A B PX PY COUNT (patterns DD, NN, DN)")
        a, b = _numbers(vals[:2], 2, "A B")
        try:
            result = closedform.rectangle_spectrum(a, b, vals[2], vals[3], int(vals[4]))
        except ValueError as e:
            raise InputError(str(e)) from None
        fields = {f"lambda_{i + 1}": v for i, v in enumerate(result)}
    elif op == "bounds":
        if args.triangle is None:
            raise InputError("bounds needs --triangle m=,s=,alpha=")
        b = closedform.triangle_bounds(triangle_params(args.triangle))
        fields = {"area": b.area, "four_area": b.four_area, "ell": b.ell, "ell_sq": b.ell_sq,
                  "altitude": b.altitude, "area_bound": b.area_bound, "side_bound": b.side_bound,
                  "sharper": b.sharper, "cylinder_mu2": b.cylinder_bound}
    else:
        spec = {"M": (1, "X", closedform.M), "x": (1, "Y", closedform.counting_x),
                "cylinder": (2, "ELL H", closedform.cylinder_mu2),
                "polya": (3, "K H M", lambda k, h, m: closedform.polya_lower_bound(int(k), h, m))}
        n, usage, fn = spec[op]
        try:
            fields = {op: fn(*_numbers(vals, n, f"closed-form {op} {usage}"))}
        except ValueError as e:
            raise InputError(str(e)) from None
    if args.format == "json":
        _emit(_json({"op": op, "args": vals, **fields}), args)
    elif args.format == "csv":
        _emit(_rows_to_csv(list(fields), [list(fields.values())]), args)
    elif len(fields) == 1 and op != "rect":
        _emit(fmt(next(iter(fields.values()))), args)
    else:
        _emit("\n".join(f"{k} {fmt(v)}" for k, v in fields.items()), args)
    if args.figure:
        log.warning("closed-form has no figure; --figure ignored")
    return EXIT_OK


def run_mesh_dump(args) -> int:
    shape = shape_from_args(args)
    if not 0 <= args.level <= MAX_LEVEL:
        raise InputError(f"--level must lie in [0, {MAX_LEVEL}]")
    mesh = triangulate(shape, args.level)
    if args.format == "text":
        _emit(mesh.dump(), args)
    elif args.format == "json":
        _emit(_json({"level": mesh.level, "nodes": mesh.nodes.tolist(), "elements": mesh.elements.tolist(),
                     "boundary_edges": mesh.boundary_edges.tolist(),
                     "boundary_labels": list(mesh.boundary_labels)}), args)
    else:
        rows = [["node", i, x, y, ""] for i, (x, y) in enumerate(mesh.nodes.tolist())]
        rows += [["element", i, a, b, c] for i, (a, b, c) in enumerate(mesh.elements.tolist())]
        _emit(_rows_to_csv(["kind", "index", "a", "b", "c"], rows), args)
    if args.figure:
        from .figures import plot_mesh
        bc = BoundaryCondition.of(args.dirichlet).validate(shape.labels)
        plot_mesh(mesh, bc.dirichlet, args.figure)
    return EXIT_OK


COMMANDS = {"solve": run_solve, "verify": run_verify, "sweep": run_sweep, "minimize": run_minimize,
            "closed-form": run_closed_form, "mesh-dump": run_mesh_dump}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="specpoly: %(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (InputError, GeometryError, ValueError) as e:
        print(f"specpoly: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except EigensolverError as e:
        print(f"specpoly: solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as e:
        print(f"specpoly: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
