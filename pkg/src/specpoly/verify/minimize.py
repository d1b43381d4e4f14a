"""Derivative-free search for the minimizer of an eigenvalue functional at fixed area."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ..eigensolve import EigensolverError, solve_mixed
from ..geometry import (
    GeometryError,
    RightTrapezoidParams,
    ShapeSpec,
    rectangle,
    right_trapezoid_from_params,
    right_triangle,
    triangle_angles,
    triangle_from_sides_angle,
)
from .families import right_trapezoid_dims

SEARCH_LEVELS = (3, 4, 5)
AGREE_REL = 0.005
N_SEEDS = 5


def parse_functional(name: str, labels) -> tuple:
    """``"lambda1-MS"`` -> ``(1, ("M", "S"))``; ``"lambda1"`` is full Dirichlet, ``"mu2"`` pure Neumann.

    The label part is split by longest match against ``labels``.
    """
    m = re.fullmatch(r"(lambda|mu)(\d+)(?:-(.+))?", name.strip())
    if not m:
        raise ValueError(f"unknown functional {name!r}; expected lambdaK[-LABELS] or muK")
    kind, k, tail = m.group(1), int(m.group(2)), m.group(3)
    if k < 1:
        raise ValueError("eigenvalue index must be >= 1")
    if kind == "mu":
        if tail:
            raise ValueError("muK takes no Dirichlet labels")
        return k, ()
    if tail is None:
        return k, tuple(labels)
    out, rest = [], tail
    ordered = sorted(labels, key=len, reverse=True)
    while rest:
        rest = rest.lstrip(",")
        hit = next((lab for lab in ordered if rest.startswith(lab)), None)
        if hit is None:
            raise ValueError(f"cannot parse labels {tail!r}; valid labels: {', '.join(labels)}")
        out.append(hit)
        rest = rest[len(hit):]
    return k, tuple(out)


# -- families: parameter vector -> shape of the given area -------------------

def _scaled(s: ShapeSpec, area: float) -> ShapeSpec:
    return s.scaled(math.sqrt(area / s.area))


def triangle_from_search(x, area):
    alpha, log_r = x
    return _scaled(triangle_from_sides_angle(math.exp(log_r), 1.0, alpha), area)


def right_trapezoid_from_search(x, area):
    l1, l2, h = right_trapezoid_dims(area, math.exp(x[0]), math.exp(x[1]))
    return right_trapezoid_from_params(RightTrapezoidParams(l1, l2, h))


def rectangle_from_search(x, area):
    q = math.exp(x[0])
    return rectangle(math.sqrt(area * q), math.sqrt(area / q))


def right_triangle_from_search(x, area):
    r = math.exp(x[0])
    return _scaled(right_triangle(r, 1.0), area)


def triangle_descriptors(t):
    lengths = t.side_lengths
    return {"alpha": triangle_angles(t)["L"], "ratio": lengths["M"] / lengths["S"]}


def right_trapezoid_descriptors(g):
    lengths = g.side_lengths
    return {"taper": lengths["l1"] / lengths["l2"], "aspect": g.height / g.mean_width,
            "length_to_width": max(g.height, lengths["l2"]) / min(g.height, lengths["l2"])}


def rectangle_descriptors(r):
    lengths = r.side_lengths
    return {"aspect": lengths["bottom"] / lengths["left"]}


@dataclass(frozen=True)
class SearchSpace:
    build: object
    describe: object
    seeds: tuple
    labels: tuple


SPACES = {
    # (apex angle, log m/s); the seeds straddle the expected minimizer
    "triangles": SearchSpace(triangle_from_search, triangle_descriptors,
                             ((1.25, 0.35), (1.9, -0.25), (1.45, 0.7), (1.75, 0.3), (1.15, -0.5)), ("L", "M", "S")),
    "right-trapezoids": SearchSpace(right_trapezoid_from_search, right_trapezoid_descriptors,
                                    ((-0.5, 0.3), (0.3, 1.0), (-0.2, 0.2), (0.25, 0.5), (-0.8, 0.9)),
                                    ("l1", "l2", "w1", "w2")),
    "rectangles": SearchSpace(rectangle_from_search, rectangle_descriptors,
                              ((0.8,), (-0.6,), (1.5,), (-1.2,), (0.3,)), ("bottom", "right", "top", "left")),
    "right-triangles": SearchSpace(right_triangle_from_search, triangle_descriptors,
                                   ((0.8,), (-0.6,), (1.5,), (-1.2,), (0.3,)), ("L", "M", "S")),
}


@dataclass
class MinimizerReport:
    family: str
    functional: str
    area: float
    best_x: list
    best_value: float
    best_shape: ShapeSpec
    descriptors: dict
    restarts: list
    agree: bool
    levels: tuple
    trace: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "functional": self.functional,
            "area": self.area,
            "levels": list(self.levels),
            "agree": self.agree,
            "best": {"x": self.best_x, "value": self.best_value, "descriptors": self.descriptors,
                     "shape": self.best_shape.to_dict()},
            "restarts": self.restarts,
            "trace": self.trace,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def minimize_functional(family: str, functional: str, area: float, levels=SEARCH_LEVELS, tol: float = 1e-8,
                        seeds=None, maxiter: int = 200) -> MinimizerReport:
    """Nelder-Mead over the family's shape parameters with the area held fixed.

    Runs one descent per seed; ``agree`` is true when every restart ends within
    0.5% of the best value.  Failed evaluations (invalid shapes, solver
    failures) count as ``+inf``.
    """
    if family not in SPACES:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(SPACES)}")
    if not area > 0:
        raise ValueError("area must be positive")
    space = SPACES[family]
    k, labels = parse_functional(functional, space.labels)
    bad = sorted(set(labels) - set(space.labels))
    if bad:
        raise ValueError(f"unknown side label(s) {bad}; valid labels: {', '.join(space.labels)}")
    seeds = space.seeds if seeds is None else tuple(tuple(s) for s in seeds)
    trace = []

    def objective(x, restart):
        try:
            s = space.build(x, area)
            value = float(solve_mixed(s, ",".join(labels), k, levels, tol).values[k - 1])
        except (GeometryError, EigensolverError, ValueError, OverflowError):
            value = math.inf
        trace.append({"restart": restart, "x": [float(v) for v in x], "value": value})
        return value

    restarts = []
    for i, x0 in enumerate(seeds):
        res = minimize(objective, np.asarray(x0, dtype=float), args=(i,), method="Nelder-Mead",
                       options={"xatol": 1e-4, "fatol": 1e-8, "maxiter": maxiter})
        try:
            shape = space.build(res.x, area)
        except (GeometryError, ValueError, OverflowError):
            shape = None
        restarts.append({"seed": list(map(float, x0)), "x": [float(v) for v in res.x], "value": float(res.fun),
                         "nfev": int(res.nfev), "converged": bool(res.success),
                         "descriptors": space.describe(shape) if shape is not None else {}})
    best = min(restarts, key=lambda r: r["value"])
    if not math.isfinite(best["value"]):
        raise EigensolverError("no restart reached a solvable shape")
    agree = all(abs(r["value"] - best["value"]) <= AGREE_REL * best["value"] for r in restarts)
    shape = space.build(best["x"], area)
    return MinimizerReport(family, functional, area, best["x"], best["value"], shape, space.describe(shape),
                           restarts, bool(agree), tuple(levels), trace)
