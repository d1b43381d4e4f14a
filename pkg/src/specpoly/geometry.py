"""Planar shapes with labeled sides and the folding/reflection/tiling constructions.

A :class:`ShapeSpec` stores vertices in counter-clockwise order; side ``i`` runs
from vertex ``i`` to vertex ``i + 1``.  Side labels are

* triangles: ``L``, ``M``, ``S`` (longest, middle, shortest),
* trapezoids: ``P1``, ``P2`` (shorter/longer parallel side), ``Q1``, ``Q2`` (legs),
* right trapezoids: ``l1``, ``l2`` (upper/lower parallel side), ``w1`` (slant),
  ``w2`` (perpendicular to ``l1`` and ``l2``),
* rectangles: ``bottom``, ``right``, ``top``, ``left``.

Shapes produced by the constructions that do not fit these families (kites,
rhombi) have kind ``"quadrilateral"`` and primed labels naming the mirrored
side they came from.
"""
from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

KINDS = ("triangle", "trapezoid", "right-trapezoid", "rectangle", "quadrilateral")
TRIANGLE_LABELS = ("L", "M", "S")
TRAPEZOID_LABELS = ("P1", "P2", "Q1", "Q2")
RIGHT_TRAPEZOID_LABELS = ("l1", "l2", "w1", "w2")
RECTANGLE_LABELS = ("bottom", "right", "top", "left")
CANONICAL_ORDER = TRIANGLE_LABELS + TRAPEZOID_LABELS + RIGHT_TRAPEZOID_LABELS + RECTANGLE_LABELS

REL_TOL = 1e-12
# angle/parallelism checks on user-supplied vertices
SHAPE_TOL = 1e-9


class GeometryError(ValueError):
    """Raised for invalid or degenerate shapes."""


def shoelace_area(vertices) -> float:
    """Signed area of a polygon (positive for counter-clockwise order)."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _edge_lengths(v: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = _cross(p2 - p1, q1 - p1)
    d2 = _cross(p2 - p1, q2 - p1)
    d3 = _cross(q2 - q1, p1 - q1)
    d4 = _cross(q2 - q1, p2 - q1)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def reflect_points(points, p, q) -> np.ndarray:
    """Mirror ``points`` across the line through ``p`` and ``q``."""
    pts = np.asarray(points, dtype=float)
    p = np.asarray(p, dtype=float)
    d = np.asarray(q, dtype=float) - p
    d = d / np.linalg.norm(d)
    rel = pts - p
    along = rel @ d
    return p + 2.0 * np.outer(along, d) - rel if pts.ndim == 2 else p + 2.0 * along * d - rel


@dataclass(frozen=True)
class ShapeSpec:
    """A triangle or quadrilateral with one symbolic label per side."""

    kind: str
    vertices: tuple
    labels: tuple

    def __post_init__(self):
        verts = tuple(tuple(float(c) for c in p) for p in self.vertices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        self._validate()

    # -- validation ---------------------------------------------------------
    def _validate(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown shape kind {self.kind!r}; expected one of {KINDS}")
        n = len(self.vertices)
        expected_n = 3 if self.kind == "triangle" else 4
        if n != expected_n:
            raise GeometryError(f"{self.kind} needs {expected_n} vertices, got {n}")
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise GeometryError(f"need {n} distinct side labels, got {self.labels}")
        v = self.array
        area = shoelace_area(v)
        lengths = _edge_lengths(v)
        diam = float(lengths.max())
        if area <= 0:
            raise GeometryError("vertices must be in counter-clockwise order with positive area")
        if n == 3 and area < 1e-14 * diam**2:
            raise GeometryError("degenerate triangle (area below 1e-14 * longest side^2)")
        if n == 4:
            if _segments_intersect(v[0], v[1], v[2], v[3]) or _segments_intersect(v[1], v[2], v[3], v[0]):
                raise GeometryError("quadrilateral is not simple")
            if area < 1e-14 * diam**2:
                raise GeometryError("degenerate quadrilateral")
        lab = dict(zip(self.labels, lengths))
        if self.kind == "triangle":
            if set(self.labels) != set(TRIANGLE_LABELS):
                raise GeometryError(f"triangle labels must be {TRIANGLE_LABELS}")
            tol = REL_TOL * diam
            if not (lab["L"] >= lab["M"] - tol and lab["M"] >= lab["S"] - tol):
                raise GeometryError("triangle labels violate length(L) >= length(M) >= length(S)")
        elif self.kind == "trapezoid":
            if set(self.labels) != set(TRAPEZOID_LABELS):
                raise GeometryError(f"trapezoid labels must be {TRAPEZOID_LABELS}")
            if not self._parallel("P1", "P2"):
                raise GeometryError("P1 and P2 must be parallel")
            if lab["P1"] > lab["P2"] * (1 + SHAPE_TOL):
                raise GeometryError("P1 must not be longer than P2")
            if self.height < 1e-12 * self.mean_width:
                raise GeometryError("degenerate trapezoid (height below 1e-12 * mean width)")
        elif self.kind == "right-trapezoid":
            if set(self.labels) != set(RIGHT_TRAPEZOID_LABELS):
                raise GeometryError(f"right-trapezoid labels must be {RIGHT_TRAPEZOID_LABELS}")
            if not self._parallel("l1", "l2"):
                raise GeometryError("l1 and l2 must be parallel")
            if not (self._perpendicular("w2", "l1") and self._perpendicular("w2", "l2")):
                raise GeometryError("w2 must be perpendicular to l1 and l2")
            if self.height < 1e-12 * self.mean_width:
                raise GeometryError("degenerate right trapezoid")
        elif self.kind == "rectangle":
            if self.labels != RECTANGLE_LABELS:
                raise GeometryError(f"rectangle labels must be {RECTANGLE_LABELS} in order")
            for a, b in (("bottom", "right"), ("right", "top"), ("top", "left")):
                if not self._perpendicular(a, b):
                    raise GeometryError("rectangle sides must meet at right angles")

    def _direction(self, label) -> np.ndarray:
        p, q = self.side(label)
        d = q - p
        return d / np.linalg.norm(d)

    def _parallel(self, a, b) -> bool:
        return abs(_cross(self._direction(a), self._direction(b))) < SHAPE_TOL

    def _perpendicular(self, a, b) -> bool:
        return abs(float(np.dot(self._direction(a), self._direction(b)))) < SHAPE_TOL

    # -- basic queries ------------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    @property
    def area(self) -> float:
        return shoelace_area(self.array)

    @property
    def side_lengths(self) -> dict:
        return dict(zip(self.labels, (float(x) for x in _edge_lengths(self.array))))

    @property
    def diameter(self) -> float:
        v = self.array
        return float(max(np.linalg.norm(a - b) for a in v for b in v))

    def side_index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise GeometryError(f"unknown side label {label!r}; valid labels: {', '.join(self.labels)}") from None

    def side(self, label):
        """Endpoints ``(p, q)`` of the side with the given label."""
        i = self.side_index(label)
        v = self.array
        return v[i], v[(i + 1) % len(v)]

    def _parallel_pair(self):
        if self.kind == "trapezoid":
            return "P1", "P2"
        if self.kind == "right-trapezoid":
            return "l1", "l2"
        if self.kind == "rectangle":
            return "bottom", "top"
        raise GeometryError(f"{self.kind} has no distinguished parallel sides")

    @property
    def height(self) -> float:
        """Distance between the distinguished parallel sides (quadrilaterals)."""
        a, b = self._parallel_pair()
        p, q = self.side(a)
        r, _ = self.side(b)
        d = (q - p) / np.linalg.norm(q - p)
        return abs(_cross(d, r - p))

    @property
    def mean_width(self) -> float:
        a, b = self._parallel_pair()
        lengths = self.side_lengths
        return 0.5 * (lengths[a] + lengths[b])

    def scaled(self, t: float) -> "ShapeSpec":
        return ShapeSpec(self.kind, tuple(tuple(t * c for c in p) for p in self.vertices), self.labels)

    def transformed(self, matrix, offset=(0.0, 0.0)) -> "ShapeSpec":
        """Apply ``x -> matrix @ x + offset``; orientation-reversing maps reverse the vertex order."""
        a = np.asarray(matrix, dtype=float)
        v = self.array @ a.T + np.asarray(offset, dtype=float)
        labels = self.labels
        if np.linalg.det(a) < 0:
            # side i (v_i -> v_i+1) becomes side n-1-i of the reversed polygon
            v = v[::-1]
            labels = tuple(reversed(labels))
            v = np.roll(v, -1, axis=0)
        return ShapeSpec(self.kind, tuple(map(tuple, v)), labels)

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": [list(p) for p in self.vertices], "labels": list(self.labels)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ShapeSpec":
        try:
            return cls(d["kind"], tuple(tuple(p) for p in d["vertices"]), tuple(d["labels"]))
        except (KeyError, TypeError) as e:
            raise GeometryError(f"malformed shape document: {e}") from None

    @classmethod
    def from_json(cls, text: str) -> "ShapeSpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise GeometryError(f"malformed shape JSON: {e}") from None
        return cls.from_dict(d)


@dataclass(frozen=True)
class BoundaryCondition:
    """The set of Dirichlet sides; all remaining sides carry the Neumann condition."""

    dirichlet: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "dirichlet", frozenset(self.dirichlet))

    @classmethod
    def of(cls, labels) -> "BoundaryCondition":
        if isinstance(labels, BoundaryCondition):
            return labels
        if labels is None:
            return cls()
        if isinstance(labels, str):
            labels = [s.strip() for s in labels.split(",") if s.strip()]
        return cls(frozenset(labels))

    def validate(self, labels: Iterable[str]) -> "BoundaryCondition":
        labels = tuple(labels)
        unknown = sorted(self.dirichlet - set(labels))
        if unknown:
            raise GeometryError(f"unknown side label(s) {unknown}; valid labels: {', '.join(labels)}")
        return self

    def sorted_labels(self, order: Sequence[str] | None = None) -> list:
        """Dirichlet labels in ``order`` (default: L, M, S, P1, ..., then the rest alphabetically)."""
        order = list(CANONICAL_ORDER if order is None else order)
        rank = {lab: i for i, lab in enumerate(order)}
        return sorted(self.dirichlet, key=lambda lab: (rank.get(lab, len(order)), lab))

    @property
    def is_neumann(self) -> bool:
        return not self.dirichlet


# -- triangles ---------------------------------------------------------------

def classify_sides(t) -> dict:
    """Map ``{"L", "M", "S"}`` to side indices of a triangle.

    Sides are ordered by decreasing length; sides whose lengths agree to
    ``1e-12`` relative are ordered by the index of the opposite vertex.
    """
    v = t.array if isinstance(t, ShapeSpec) else np.asarray(t, dtype=float)
    if v.shape != (3, 2):
        raise GeometryError("classify_sides expects a triangle")
    lengths = _edge_lengths(v)
    ell = float(lengths.max())
    if abs(shoelace_area(v)) < 1e-14 * ell**2:
        raise GeometryError("degenerate triangle (area below 1e-14 * longest side^2)")

    def cmp(i, j):
        if abs(lengths[i] - lengths[j]) <= REL_TOL * ell:
            return ((i + 2) % 3) - ((j + 2) % 3)
        return -1 if lengths[i] > lengths[j] else 1

    order = sorted(range(3), key=functools.cmp_to_key(cmp))
    return dict(zip(TRIANGLE_LABELS, order))


def make_triangle(vertices) -> ShapeSpec:
    """Triangle from three points in any order, labeled by :func:`classify_sides`."""
    v = np.asarray(vertices, dtype=float)
    if shoelace_area(v) < 0:
        v = v[[0, 2, 1]]
    index = classify_sides(v)
    labels = [None] * 3
    for lab, i in index.items():
        labels[i] = lab
    return ShapeSpec("triangle", tuple(map(tuple, v)), tuple(labels))


@dataclass(frozen=True)
class TriangleParams:
    """Two sides ``m >= s`` enclosing the angle ``alpha`` opposite the longest side.

    ``ell`` and ``area`` are optional redundant data checked for consistency.
    """

    m: float
    s: float
    alpha: float
    ell: float | None = None
    area: float | None = None

    @classmethod
    def from_area(cls, area: float, alpha: float, ratio: float) -> "TriangleParams":
        """Parameters with ``m / s = ratio`` scaled to the given area."""
        s = math.sqrt(2.0 * area / (ratio * math.sin(alpha)))
        return cls(m=ratio * s, s=s, alpha=alpha)

    @property
    def ell_sq(self) -> float:
        return self.m**2 + self.s**2 - 2.0 * self.m * self.s * math.cos(self.alpha)

    @property
    def ell_computed(self) -> float:
        return math.sqrt(self.ell_sq)

    @property
    def area_computed(self) -> float:
        return 0.5 * self.m * self.s * math.sin(self.alpha)


def triangle_from_sides_angle(b: float, c: float, angle: float) -> ShapeSpec:
    """Triangle with sides ``b``, ``c`` enclosing ``angle``; labels by length."""
    if not (b > 0 and c > 0 and 0 < angle < math.pi):
        raise GeometryError("need positive sides and an angle in (0, pi)")
    v = [(0.0, 0.0), (c, 0.0), (b * math.cos(angle), b * math.sin(angle))]
    return make_triangle(v)


def triangle_from_params(p: TriangleParams) -> ShapeSpec:
    """Canonical triangle: side ``L`` on the x-axis from the origin, apex above.

    ``S`` is adjacent to the origin and ``M`` to ``(ell, 0)``.
    """
    m, s, alpha = float(p.m), float(p.s), float(p.alpha)
    if not (m > 0 and s > 0 and 0 < alpha < math.pi):
        raise GeometryError("need m, s > 0 and 0 < alpha < pi")
    if m < s * (1 - REL_TOL):
        raise GeometryError("TriangleParams requires m >= s")
    ell = p.ell_computed
    area = p.area_computed
    if p.ell is not None and abs(p.ell - ell) > REL_TOL * ell:
        raise GeometryError(f"inconsistent parameters: ell={p.ell} but law of cosines gives {ell}")
    if p.area is not None and abs(p.area - area) > REL_TOL * area:
        raise GeometryError(f"inconsistent parameters: area={p.area} but 0.5*m*s*sin(alpha) = {area}")
    if ell < m * (1 - REL_TOL):
        raise GeometryError(
            f"alpha={alpha} is not opposite the longest side (third side {ell:.6g} < m={m:.6g})"
        )
    x = (ell**2 + s**2 - m**2) / (2.0 * ell)
    y = 2.0 * area / ell
    t = make_triangle([(0.0, 0.0), (ell, 0.0), (x, y)])
    return t


def triangle_angles(t: ShapeSpec) -> dict:
    """Interior angle opposite each labeled side."""
    v = t.array
    out = {}
    for lab, i in zip(t.labels, range(3)):
        k = (i + 2) % 3
        a, b = v[i] - v[k], v[(i + 1) % 3] - v[k]
        out[lab] = math.atan2(abs(_cross(a, b)), float(np.dot(a, b)))
    return out


def triangle_params_of(t: ShapeSpec) -> TriangleParams:
    lengths = t.side_lengths
    return TriangleParams(m=lengths["M"], s=lengths["S"], alpha=triangle_angles(t)["L"])


def right_angle_vertex(t: ShapeSpec, tol: float = 1e-10):
    """Index of the right-angle vertex of a triangle, or ``None``."""
    v = t.array
    for k in range(3):
        a, b = v[(k + 1) % 3] - v[k], v[(k + 2) % 3] - v[k]
        ang = math.atan2(abs(_cross(a, b)), float(np.dot(a, b)))
        if abs(ang - math.pi / 2) <= tol:
            return k
    return None


def right_triangle(leg_a: float, leg_b: float) -> ShapeSpec:
    if not (leg_a > 0 and leg_b > 0):
        raise GeometryError("right triangle needs positive legs")
    return make_triangle([(0.0, 0.0), (leg_a, 0.0), (0.0, leg_b)])


def equilateral(side: float = 1.0) -> ShapeSpec:
    if not side > 0:
        raise GeometryError("equilateral triangle needs a positive side")
    return make_triangle([(0.0, 0.0), (side, 0.0), (side / 2, side * math.sqrt(3) / 2)])


# -- quadrilaterals ----------------------------------------------------------

@dataclass(frozen=True)
class TrapezoidParams:
    """Parallel sides ``p1 <= p2`` at distance ``h``; the shorter side starts at ``top_offset``."""

    p1: float
    p2: float
    h: float
    top_offset: float | None = None

    @property
    def mean_width(self) -> float:
        return 0.5 * (self.p1 + self.p2)

    @property
    def offset(self) -> float:
        return 0.5 * (self.p2 - self.p1) if self.top_offset is None else float(self.top_offset)


def trapezoid_from_params(p: TrapezoidParams) -> ShapeSpec:
    if not (p.p1 > 0 and p.p2 > 0 and p.h > 0):
        raise GeometryError("trapezoid needs positive p1, p2, h")
    if p.p1 > p.p2 * (1 + REL_TOL):
        raise GeometryError("trapezoid needs p1 <= p2")
    if p.h < 1e-12 * p.mean_width:
        raise GeometryError("degenerate trapezoid (h below 1e-12 * mean width)")
    o = p.offset
    v = ((0.0, 0.0), (p.p2, 0.0), (o + p.p1, p.h), (o, p.h))
    return ShapeSpec("trapezoid", v, ("P2", "Q2", "P1", "Q1"))


def trapezoid_from_vertices(vertices, parallel=(0, 2)) -> ShapeSpec:
    """Label a quadrilateral whose sides ``parallel`` are parallel.

    The shorter parallel side is ``P1``; ``Q2`` follows ``P2`` and ``Q1``
    follows ``P1`` in counter-clockwise order.
    """
    v = np.asarray(vertices, dtype=float)
    if shoelace_area(v) < 0:
        v = v[::-1]
        v = np.roll(v, -1, axis=0)
        parallel = tuple(3 - i for i in parallel)
    i, j = parallel
    if (j - i) % 4 != 2:
        raise GeometryError("parallel sides of a trapezoid must be opposite")
    lengths = _edge_lengths(v)
    short, long_ = (i, j) if lengths[i] <= lengths[j] * (1 + REL_TOL) else (j, i)
    labels = [None] * 4
    labels[short] = "P1"
    labels[long_] = "P2"
    labels[(long_ + 1) % 4] = "Q2"
    labels[(short + 1) % 4] = "Q1"
    return ShapeSpec("trapezoid", tuple(map(tuple, v)), tuple(labels))


@dataclass(frozen=True)
class RightTrapezoidParams:
    """Upper side ``l1``, lower side ``l2``, perpendicular side of length ``h``."""

    l1: float
    l2: float
    h: float

    @property
    def area(self) -> float:
        return 0.5 * (self.l1 + self.l2) * self.h


def right_trapezoid_from_params(p: RightTrapezoidParams) -> ShapeSpec:
    if not (p.l1 > 0 and p.l2 > 0 and p.h > 0):
        raise GeometryError("right trapezoid needs positive l1, l2, h")
    v = ((0.0, 0.0), (p.l2, 0.0), (p.l1, p.h), (0.0, p.h))
    return ShapeSpec("right-trapezoid", v, ("l2", "w1", "l1", "w2"))


def rectangle(a: float, b: float) -> ShapeSpec:
    """Axis-aligned ``a`` (x) by ``b`` (y) rectangle with its lower-left corner at the origin."""
    if not (a > 0 and b > 0):
        raise GeometryError("rectangle needs positive side lengths")
    return ShapeSpec("rectangle", ((0.0, 0.0), (a, 0.0), (a, b), (0.0, b)), RECTANGLE_LABELS)


# -- constructions -----------------------------------------------------------

def fold_along_longest(t: ShapeSpec) -> ShapeSpec:
    """Union of a triangle and its mirror image across the line of side ``L``.

    The result is a kite of twice the area.  Mirrored sides are primed.
    """
    if t.kind != "triangle":
        raise GeometryError("fold_along_longest expects a triangle")
    i = t.side_index("L")
    v = t.array
    a, b, c = v[i], v[(i + 1) % 3], v[(i + 2) % 3]
    c_img = reflect_points(c, a, b)
    lab = dict(zip(range(3), t.labels))
    # CCW: A -> C' -> B -> C
    verts = (tuple(a), tuple(c_img), tuple(b), tuple(c))
    labels = (lab[(i + 2) % 3] + "'", lab[(i + 1) % 3] + "'", lab[(i + 1) % 3], lab[(i + 2) % 3])
    return ShapeSpec("quadrilateral", verts, labels)


def reflect_right_triangle_to_rhombus(t: ShapeSpec, tol: float = 1e-10) -> ShapeSpec:
    """Rhombus made of the four reflections of a right triangle across its legs.

    Its diagonals are the doubled legs; every side is a copy of the hypotenuse.
    """
    if t.kind != "triangle":
        raise GeometryError("expected a triangle")
    k = right_angle_vertex(t, tol)
    if k is None:
        raise GeometryError("triangle has no right angle (within 1e-10 rad)")
    v = t.array
    r, p, q = v[k], v[(k + 1) % 3], v[(k + 2) % 3]
    verts = [p, q, 2 * r - p, 2 * r - q]
    return ShapeSpec("quadrilateral", tuple(map(tuple, verts)), ("L", "L'", "L''", "L'''"))


def fold_right_trapezoid(g: ShapeSpec) -> ShapeSpec:
    """Isosceles trapezoid formed by mirroring a right trapezoid across ``w2``."""
    if g.kind != "right-trapezoid":
        raise GeometryError("fold_right_trapezoid expects a right trapezoid")
    i = g.side_index("w2")
    v = np.roll(g.array, -i, axis=0)
    # v[0] -> v[1] is w2, v[2] -> v[3] is w1; the w2 endpoints end up inside the doubled sides
    img = reflect_points(v, v[0], v[1])
    verts = [v[2], v[3], img[3], img[2]]
    return trapezoid_from_vertices(verts, parallel=(1, 3))


@dataclass(frozen=True)
class Tiling:
    """Strip of rotated trapezoid copies inside its completing rectangle."""

    width: float
    height: float
    supplement: float
    copies: tuple
    x_range: tuple


def _trapezoid_frame(g: ShapeSpec):
    """Vertices of ``g`` rotated so the longer parallel side is horizontal at the bottom."""
    a, b = g._parallel_pair()
    lengths = g.side_lengths
    long_ = a if lengths[a] >= lengths[b] else b
    p, q = g.side(long_)
    d = (q - p) / np.linalg.norm(q - p)
    rot = np.array([[d[0], d[1]], [-d[1], d[0]]])
    v = (g.array - p) @ rot.T
    if shoelace_area(v) < 0:
        v[:, 1] *= -1
    return v


def _strip(v: np.ndarray, n: int):
    copies = [v]
    for _ in range(n - 1):
        cur = copies[-1]
        # legs are the two non-horizontal sides; rotate about the right one's midpoint
        mids = []
        for i in range(4):
            a, b = cur[i], cur[(i + 1) % 4]
            if abs(a[1] - b[1]) > 1e-14 * (abs(a[1]) + abs(b[1]) + 1):
                mids.append(0.5 * (a + b))
        centre = max(mids, key=lambda m: m[0])
        copies.append(2 * centre - cur)
    return copies


def tile_trapezoid_to_rectangle(g: ShapeSpec, n_copies: int) -> Tiling:
    """Chain ``n_copies`` trapezoids by half-turns about leg midpoints and complete to a rectangle.

    Consecutive copies share a leg, so the strip's top and bottom are straight
    lines at height 0 and ``h``.  The completing rectangle has width
    ``n_copies * m + c``; ``c`` is the larger of the end-cap widths over odd
    and even chain lengths, which makes it independent of ``n_copies``.
    """
    if n_copies < 1:
        raise ValueError("n_copies must be >= 1")
    if g.kind not in ("trapezoid", "right-trapezoid", "rectangle"):
        raise GeometryError("tiling expects a trapezoid")
    v = _trapezoid_frame(g)
    m = g.mean_width

    def extent(n):
        pts = np.vstack(_strip(v, n))
        return float(pts[:, 0].min()), float(pts[:, 0].max())

    c = 0.0
    for n in (1, 2):
        lo, hi = extent(n)
        c = max(c, hi - lo - n * m)
    if c < 1e-12 * m:
        c = 0.0
    copies = _strip(v, n_copies)
    lo = float(np.vstack(copies)[:, 0].min())
    width = n_copies * m + c
    return Tiling(width=width, height=g.height, supplement=c,
                  copies=tuple(tuple(map(tuple, a.tolist())) for a in copies), x_range=(lo, lo + width))
