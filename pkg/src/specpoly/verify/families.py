"""Deterministic parameter grids over the shape classes the inequalities quantify over."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import (
    RightTrapezoidParams,
    TrapezoidParams,
    TriangleParams,
    right_trapezoid_from_params,
    right_triangle,
    trapezoid_from_params,
    triangle_from_params,
)


@dataclass(frozen=True)
class ShapeFamily:
    kind: str
    params: tuple
    shapes: tuple

    def __len__(self):
        return len(self.shapes)

    def __iter__(self):
        return iter(zip(self.params, self.shapes))


def triangle_aspect(alpha: float, ratio: float) -> float:
    """``ell / h`` (longest side over the altitude onto it) for sides ``ratio``, 1 enclosing ``alpha``."""
    ell_sq = ratio**2 + 1 - 2 * ratio * math.cos(alpha)
    return ell_sq / (ratio * math.sin(alpha))


def max_ratio(alpha: float, cap: float = 4.0, max_aspect: float = 20.0) -> float:
    """Largest ``m/s`` keeping ``alpha`` opposite the longest side and the aspect within ``max_aspect``."""
    r = cap
    if alpha < math.pi / 2:
        r = min(r, (1 - 1e-9) / (2.0 * math.cos(alpha)))
    # aspect <= A  <=>  r**2 - (2 cos a + A sin a) r + 1 <= 0
    bq = 2 * math.cos(alpha) + max_aspect * math.sin(alpha)
    disc = bq * bq - 4
    if disc > 0:
        r = min(r, 0.5 * (bq + math.sqrt(disc)))
    return max(r, 1.0)


def triangles_fixed_area(area: float = 0.5, n_alpha: int = 20, n_ratio: int = 20,
                         alpha_range=(7 * math.pi / 18, 8 * math.pi / 9), ratio_cap: float = 4.0,
                         max_aspect: float = 20.0) -> ShapeFamily:
    """Triangles of one area over a grid in (apex angle, m/s).

    ``alpha`` (the angle opposite the longest side) is uniform over
    ``alpha_range``; for each ``alpha`` the ratio is log-uniform on
    ``[1, max_ratio(alpha)]``.  With the default range and ``n_alpha=10`` the
    grid contains ``alpha = pi/2`` and hence the isosceles right triangle.
    """
    params, shapes = [], []
    for alpha in np.linspace(*alpha_range, n_alpha):
        rmax = max_ratio(alpha, ratio_cap, max_aspect)
        for ratio in np.geomspace(1.0, rmax, n_ratio) if n_ratio > 1 else [1.0]:
            p = TriangleParams.from_area(area, float(alpha), float(ratio))
            params.append({"alpha": float(alpha), "ratio": float(ratio)})
            shapes.append(triangle_from_params(p))
    return ShapeFamily("triangles", tuple(params), tuple(shapes))


def right_triangles(area: float = 0.5, n: int = 10, ratio_max: float = 5.0) -> ShapeFamily:
    """Right triangles of one area with leg ratio log-uniform on ``[1, ratio_max]``."""
    params, shapes = [], []
    for r in np.geomspace(1.0, ratio_max, n):
        b = math.sqrt(2 * area / r)
        params.append({"leg_ratio": float(r)})
        shapes.append(right_triangle(r * b, b))
    return ShapeFamily("right-triangles", tuple(params), tuple(shapes))


def trapezoids(m: float = 2.0, h: float = 1.0, n_taper: int = 5, n_shift: int = 5,
               taper_max: float = 0.8, shift_max: float = 0.4) -> ShapeFamily:
    """Trapezoids with mean width ``m`` and height ``h``.

    ``p1 = m (1 - d)``, ``p2 = m (1 + d)`` with ``d`` uniform on ``[0, taper_max]``;
    the shorter side is shifted by ``sigma * m`` from the centred position with
    ``sigma`` uniform on ``[-shift_max, shift_max]``.  ``d = sigma = 0`` is the rectangle.
    """
    params, shapes = [], []
    for d in np.linspace(0.0, taper_max, n_taper):
        for sigma in np.linspace(-shift_max, shift_max, n_shift) if n_shift > 1 else [0.0]:
            p1, p2 = m * (1 - d), m * (1 + d)
            offset = 0.5 * (p2 - p1) + sigma * m
            params.append({"m": m, "h": h, "taper": float(d), "shift": float(sigma)})
            shapes.append(trapezoid_from_params(TrapezoidParams(p1, p2, h, offset)))
    return ShapeFamily("trapezoids", tuple(params), tuple(shapes))


def right_trapezoid_dims(area: float, taper: float, aspect: float):
    """``(l1, l2, h)`` with ``l1/l2 = taper``, ``h/mean_width = aspect`` and the given area."""
    mean = math.sqrt(area / aspect)
    h = aspect * mean
    l2 = 2 * mean / (1 + taper)
    return taper * l2, l2, h


def right_trapezoids(area: float = 1.0, tapers=(0.25, 0.5, 0.75, 1.0, 1.5), n_aspect: int = 10) -> ShapeFamily:
    """Right trapezoids of one area over ``l1/l2`` and ``h / mean width``.

    Aspects are ``2 * sqrt(2)**(i - 5)``; ``taper = 1``, ``aspect = 2`` is the
    rectangle whose double across ``w2`` is a square.
    """
    params, shapes = [], []
    for t in tapers:
        for i in range(n_aspect):
            q = 2.0 * math.sqrt(2.0) ** (i - 5)
            l1, l2, h = right_trapezoid_dims(area, t, q)
            params.append({"taper": float(t), "aspect": float(q)})
            shapes.append(right_trapezoid_from_params(RightTrapezoidParams(l1, l2, h)))
    return ShapeFamily("right-trapezoids", tuple(params), tuple(shapes))


FAMILIES = {
    "triangles": triangles_fixed_area,
    "right-triangles": right_triangles,
    "trapezoids": trapezoids,
    "right-trapezoids": right_trapezoids,
}
