"""Linear finite elements for the Dirichlet energy and the L2 mass with Dirichlet sides eliminated."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .geometry import BoundaryCondition
from .mesh import Mesh, dirichlet_nodes


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """Stiffness ``K`` and mass ``B`` restricted to the free (non-Dirichlet) nodes.

    ``free[i]`` is the mesh node carrying free degree of freedom ``i``.
    """

    K: sp.csr_matrix
    B: sp.csr_matrix
    free: np.ndarray
    mesh: Mesh
    bc: BoundaryCondition
    K_full: sp.csr_matrix
    B_full: sp.csr_matrix

    @property
    def dim(self) -> int:
        return len(self.free)

    def expand(self, v) -> np.ndarray:
        """Nodal vector on the whole mesh, zero on Dirichlet nodes."""
        u = np.zeros(self.mesh.n_nodes, dtype=np.result_type(v, float))
        u[self.free] = v
        return u

    def restrict(self, u) -> np.ndarray:
        return np.asarray(u)[self.free]


def element_matrices(nodes: np.ndarray, elements: np.ndarray):
    """Exact P1 stiffness and mass matrices, shape ``(E, 3, 3)`` each."""
    p = nodes[elements]
    x, y = p[..., 0], p[..., 1]
    # b_i = y_j - y_k, c_i = x_k - x_j for the cyclic triple (i, j, k)
    b = np.roll(y, -1, axis=1) - np.roll(y, -2, axis=1)
    c = np.roll(x, -2, axis=1) - np.roll(x, -1, axis=1)
    area = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    ke = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * area)[:, None, None]
    me = (np.ones((3, 3)) + np.eye(3))[None] * (area / 12.0)[:, None, None]
    return ke, me


def assemble_full(m: Mesh):
    ke, me = element_matrices(m.nodes, m.elements)
    rows = np.repeat(m.elements, 3, axis=1).ravel()
    cols = np.tile(m.elements, (1, 3)).ravel()
    n = m.n_nodes
    K = sp.coo_matrix((ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    B = sp.coo_matrix((me.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return K, B


def assemble(m: Mesh, bc=None) -> AssembledSystem:
    """Assemble the discrete Rayleigh quotient forms; Dirichlet rows and columns are deleted."""
    bc = BoundaryCondition.of(bc).validate(m.side_labels)
    K_full, B_full = assemble_full(m)
    fixed = dirichlet_nodes(m, bc)
    free = np.setdiff1d(np.arange(m.n_nodes), fixed)
    if len(free) == 0:
        raise ValueError("no free nodes: every node is on a Dirichlet side; refine the mesh (level >= 1)")
    K = K_full[free][:, free].tocsr()
    B = B_full[free][:, free].tocsr()
    return AssembledSystem(K, B, free, m, bc, K_full, B_full)


def rayleigh_quotient(sys: AssembledSystem, v) -> float:
    """``(v^T K v) / (v^T B v)`` for a coefficient vector on the free nodes."""
    v = np.asarray(v, dtype=float)
    if v.shape != (sys.dim,):
        raise ValueError(f"expected a vector of length {sys.dim}, got shape {v.shape}")
    den = float(v @ (sys.B @ v))
    if den <= 0:
        raise ValueError("Rayleigh quotient of the zero vector is undefined")
    return float(v @ (sys.K @ v)) / den
