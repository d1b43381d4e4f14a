"""Conforming triangulations with side-tagged boundary edges and red refinement."""
from __future__ import annotations

from dataclasses import dataclass
import io

import numpy as np

from .geometry import BoundaryCondition, GeometryError, ShapeSpec, reflect_points

MAX_LEVEL = 12


@dataclass(frozen=True, eq=False)
class Mesh:
    """Triangle mesh.

    Attributes
    ----------
    nodes : (N, 2) float array
    elements : (E, 3) int array, counter-clockwise node triples
    boundary_edges : (B, 2) int array
    boundary_labels : tuple of str, side label of each boundary edge
    level : int, number of red refinements applied to the base mesh
    side_labels : tuple of str, labels of the source shape
    """

    nodes: np.ndarray
    elements: np.ndarray
    boundary_edges: np.ndarray
    boundary_labels: tuple
    level: int
    side_labels: tuple

    def __post_init__(self):
        for name in ("nodes", "elements", "boundary_edges"):
            getattr(self, name).setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def element_areas(self) -> np.ndarray:
        p = self.nodes[self.elements]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    @property
    def area(self) -> float:
        return float(self.element_areas().sum())

    def edges(self) -> np.ndarray:
        """Unique undirected edges as sorted node pairs."""
        return _unique_edges(self.elements)[0]

    def min_angle(self) -> float:
        p = self.nodes[self.elements]
        angles = []
        for k in range(3):
            a = p[:, (k + 1) % 3] - p[:, k]
            b = p[:, (k + 2) % 3] - p[:, k]
            cross = np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
            angles.append(np.arctan2(cross, np.einsum("ij,ij->i", a, b)))
        return float(np.min(angles))

    def dump(self) -> str:
        """Plain-text listing: ``x y`` per node, a blank line, ``i j k`` per element."""
        buf = io.StringIO()
        for x, y in self.nodes:
            buf.write(f"{x:.17g} {y:.17g}\n")
        buf.write("\n")
        for i, j, k in self.elements:
            buf.write(f"{i} {j} {k}\n")
        return buf.getvalue()


def _unique_edges(elements: np.ndarray):
    e = np.vstack([elements[:, [0, 1]], elements[:, [1, 2]], elements[:, [2, 0]]])
    e = np.sort(e, axis=1)
    uniq, inverse = np.unique(e, axis=0, return_inverse=True)
    return uniq, inverse.reshape(3, -1).T


def base_mesh(s: ShapeSpec) -> Mesh:
    nodes = s.array
    n = len(nodes)
    if n == 3:
        elements = np.array([[0, 1, 2]])
    else:
        # split by the diagonal from vertex 0 (bottom-left in the canonical layouts)
        elements = np.array([[0, 1, 2], [0, 2, 3]])
    edges = np.array([[i, (i + 1) % n] for i in range(n)])
    return Mesh(nodes, elements, edges, tuple(s.labels), 0, tuple(s.labels))


def refine(m: Mesh) -> Mesh:
    """One round of red refinement: every triangle splits into four similar ones."""
    uniq, local = _unique_edges(m.elements)
    n = m.n_nodes
    mids = 0.5 * (m.nodes[uniq[:, 0]] + m.nodes[uniq[:, 1]])
    nodes = np.vstack([m.nodes, mids])
    a, b, c = m.elements.T
    ab, bc, ca = (n + local[:, 0]), (n + local[:, 1]), (n + local[:, 2])
    elements = np.vstack([
        np.column_stack([a, ab, ca]),
        np.column_stack([ab, b, bc]),
        np.column_stack([ca, bc, c]),
        np.column_stack([ab, bc, ca]),
    ])
    keys = uniq[:, 0] * n + uniq[:, 1]
    be = m.boundary_edges
    bkeys = np.minimum(be[:, 0], be[:, 1]) * n + np.maximum(be[:, 0], be[:, 1])
    pos = np.searchsorted(keys, bkeys)
    if np.any(keys[pos] != bkeys):
        raise GeometryError("boundary edge not found among element edges")
    bm = n + pos
    new_be = np.empty((2 * len(be), 2), dtype=int)
    new_be[0::2, 0], new_be[0::2, 1] = be[:, 0], bm
    new_be[1::2, 0], new_be[1::2, 1] = bm, be[:, 1]
    labels = tuple(lab for lab in m.boundary_labels for _ in range(2))
    return Mesh(nodes, elements, new_be, labels, m.level + 1, m.side_labels)


def triangulate(s: ShapeSpec, level: int) -> Mesh:
    """Base mesh of ``s`` (one element for triangles, two for quadrilaterals) refined ``level`` times."""
    if level < 0:
        raise ValueError("level must be >= 0")
    if level > MAX_LEVEL:
        raise ValueError(f"level {level} exceeds the memory guard of {MAX_LEVEL}")
    m = base_mesh(s)
    for _ in range(level):
        m = refine(m)
    return m


def mesh_sequence(s: ShapeSpec, levels) -> list:
    """Nested meshes of ``s`` at each of the given refinement levels (ascending)."""
    levels = sorted(levels)
    if levels and levels[-1] > MAX_LEVEL:
        raise ValueError(f"level {levels[-1]} exceeds the memory guard of {MAX_LEVEL}")
    out = []
    m = base_mesh(s)
    for lev in levels:
        while m.level < lev:
            m = refine(m)
        out.append(m)
    return out


def dirichlet_nodes(m: Mesh, bc) -> np.ndarray:
    """Sorted indices of all nodes on a Dirichlet side, endpoints included."""
    bc = BoundaryCondition.of(bc).validate(m.side_labels)
    if not bc.dirichlet:
        return np.zeros(0, dtype=int)
    mask = np.array([lab in bc.dirichlet for lab in m.boundary_labels], dtype=bool)
    return np.unique(m.boundary_edges[mask].ravel())


def mirror_union(m: Mesh, label: str):
    """Glue ``m`` to its mirror image across the straight side ``label``.

    Nodes on that side are shared; its boundary edges become interior.  Mirrored
    boundary edges get primed labels.  Returns ``(mesh, image)`` where
    ``image[i]`` is the index of the mirror of node ``i``.
    """
    mask = np.array([lab == label for lab in m.boundary_labels], dtype=bool)
    if not mask.any():
        raise GeometryError(f"mesh has no side labeled {label!r}")
    on_side = np.unique(m.boundary_edges[mask].ravel())
    p = m.nodes[on_side]
    # endpoints of the side: the pair of side nodes farthest apart
    i0 = int(np.argmin(p[:, 0] + 1e-3 * p[:, 1]))
    d2 = np.sum((p - p[i0]) ** 2, axis=1)
    i1 = int(np.argmax(d2))
    mirrored = reflect_points(m.nodes, p[i0], p[i1])
    n = m.n_nodes
    image = np.full(n, -1, dtype=int)
    image[on_side] = on_side
    others = np.setdiff1d(np.arange(n), on_side)
    image[others] = n + np.arange(len(others))
    nodes = np.vstack([m.nodes, mirrored[others]])
    # reflection reverses orientation
    mirror_elements = image[m.elements][:, [0, 2, 1]]
    elements = np.vstack([m.elements, mirror_elements])
    keep = ~mask
    be = m.boundary_edges[keep]
    be_img = image[be][:, ::-1]
    labels = tuple(lab for lab, k in zip(m.boundary_labels, keep) if k)
    side_labels = tuple(lab for lab in m.side_labels if lab != label)
    side_labels = side_labels + tuple(lab + "'" for lab in side_labels)
    out = Mesh(nodes, elements, np.vstack([be, be_img]), labels + tuple(lab + "'" for lab in labels),
               m.level, side_labels)
    return out, image
