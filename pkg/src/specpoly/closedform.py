"""Exact spectra and lower-bound formulas.

Rectangles separate: along an axis of length ``c`` the admissible frequencies are
``(i pi / c)**2`` with ``i >= 1`` (DD), ``i >= 0`` (NN) or ``(i + 1/2)**2 (pi / c)**2``
with ``i >= 0`` (DN).
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .geometry import GeometryError, ShapeSpec, TriangleParams, triangle_from_sides_angle

PI2 = math.pi**2
PATTERNS = ("DD", "NN", "DN")


def axis_frequencies(length: float, pattern: str, count: int) -> np.ndarray:
    """The ``count`` smallest 1D eigenvalues on an interval of the given length."""
    pattern = pattern.upper()
    if pattern == "ND":
        pattern = "DN"
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    i = np.arange(count, dtype=float)
    if pattern == "DD":
        i = i + 1.0
    elif pattern == "DN":
        i = i + 0.5
    return (i * math.pi / length) ** 2


def rectangle_spectrum(a: float, b: float, px: str, py: str, count: int) -> list:
    """The ``count`` smallest eigenvalues of an ``a`` x ``b`` rectangle, with multiplicity.

    ``px`` is the pattern on the two sides perpendicular to the x-axis, ``py``
    on the two sides perpendicular to the y-axis.
    """
    if not (a > 0 and b > 0):
        raise ValueError("rectangle sides must be positive")
    if count <= 0:
        return []
    # the smallest `count` sums only use the first `count` frequencies per axis
    fx = axis_frequencies(a, px, count)
    fy = axis_frequencies(b, py, count)
    sums = np.sort(np.add.outer(fx, fy).ravel(), kind="stable")
    return [float(v) for v in sums[:count]]


def rectangle_count_below(a: float, b: float, lam: float) -> int:
    """Number of DD (x, length ``a``) x NN (y, length ``b``) eigenvalues ``<= lam``.

    ``sum_j floor((a/b) * sqrt((b**2 lam / pi**2 - j**2)_+))``.
    """
    y = b * b * lam / PI2
    if y < 0:
        return 0
    total = 0
    for j in range(int(math.isqrt(int(math.floor(y)))) + 2):
        z = y - j * j
        if z <= 0:
            break
        total += int(math.floor((a / b) * math.sqrt(z)))
    return total


def cylinder_mu2(ell: float, h: float) -> float:
    """First nonzero Neumann eigenvalue of the ``ell``-periodic strip of height ``h``.

    Gluing the vertical sides of an ``ell`` x ``h`` rectangle gives a cylinder of
    circumference ``ell``: ``min(pi**2 / h**2, 4 pi**2 / ell**2)``.
    """
    if not (ell > 0 and h > 0):
        raise ValueError("ell and h must be positive")
    return min(PI2 / h**2, 4.0 * PI2 / ell**2)


def counting_x(y: float) -> float:
    """``sum_{j >= 0} sqrt((y - j**2)_+)``."""
    if y < 0:
        raise ValueError("y must be >= 0")
    n = math.isqrt(int(math.floor(y)))
    while (n + 1) ** 2 <= y:
        n += 1
    return float(sum(math.sqrt(y - j * j) for j in range(n + 1)))


def M(x: float, tol: float = 0.0) -> float:
    """Inverse of :func:`counting_x`.

    ``M(x) = x**2`` on ``[0, 1]``; beyond that, bisection on ``[1, x**2]``
    (``counting_x(y) >= sqrt(y)`` bounds the root by ``x**2``).  With the
    default ``tol=0`` bisection runs until the bracket stops shrinking in
    double precision.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if x <= 1.0:
        return x * x
    lo, hi = 1.0, x * x
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if counting_x(mid) < x:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def polya_lower_bound(k: int, h: float, m: float) -> float:
    """``(pi**2 / h**2) M(h k / m)``; equals ``pi**2 k**2 / m**2`` when ``h k <= m``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not (h > 0 and m > 0):
        raise ValueError("h and m must be positive")
    if h * k <= m:
        return PI2 * k * k / (m * m)
    return PI2 / h**2 * M(h * k / m)


@dataclass(frozen=True)
class TriangleBounds:
    area: float
    ell: float
    altitude: float
    area_bound: float
    side_bound: float
    sharper: str
    cylinder_bound: float

    @property
    def four_area(self) -> float:
        return 4.0 * self.area

    @property
    def ell_sq(self) -> float:
        return self.ell**2


def triangle_bounds(t) -> TriangleBounds:
    """Area bound ``pi**2 / |T|`` and side bound ``4 pi**2 / ell**2`` for a triangle.

    ``sharper`` names the larger of the two (``"tie"`` when ``ell**2 == 4|T|`` to
    1e-12 relative).  ``cylinder_bound`` is ``cylinder_mu2(ell, h)`` for the
    altitude ``h`` onto the longest side.

    Accepts a :class:`TriangleParams` (interpreted as two sides and their
    included angle; the longest side is whichever side is longest) or a
    triangle :class:`ShapeSpec`.
    """
    if isinstance(t, TriangleParams):
        t = triangle_from_sides_angle(t.m, t.s, t.alpha)
    if not isinstance(t, ShapeSpec) or t.kind != "triangle":
        raise GeometryError("triangle_bounds expects a triangle")
    area = t.area
    ell = t.side_lengths["L"]
    h = 2.0 * area / ell
    area_bound = PI2 / area
    side_bound = 4.0 * PI2 / ell**2
    gap = ell**2 - 4.0 * area
    if abs(gap) <= 1e-12 * ell**2:
        sharper = "tie"
    elif gap > 0:
        sharper = "area"
    else:
        sharper = "side"
    return TriangleBounds(area, ell, h, area_bound, side_bound, sharper, cylinder_mu2(ell, h))

