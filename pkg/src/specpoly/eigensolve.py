"""Smallest eigenpairs of ``K x = lambda B x`` and Richardson extrapolation over nested meshes."""
from __future__ import annotations

from dataclasses import dataclass, field
import json
import logging

import numpy as np
import scipy.linalg as la
import scipy.sparse.linalg as sla

from .fem import AssembledSystem, assemble
from .geometry import BoundaryCondition, ShapeSpec
from .mesh import mesh_sequence

log = logging.getLogger(__name__)

DEFAULT_LEVELS = (3, 4, 5, 6)
DEFAULT_TOL = 1e-8
MAX_ITER = 500
# below this size a dense solve is cheaper than shift-invert Lanczos
DENSE_DIM = 300


class EigensolverError(RuntimeError):
    """Factorization breakdown, non-convergence or residuals above tolerance."""


@dataclass
class Spectrum:
    """Ascending eigenvalue estimates with provenance.

    For a single discrete solve ``errors`` is ``None`` and ``residuals`` holds
    the relative residuals.  For a level sequence ``values`` are the
    extrapolated estimates, ``errors`` the error bars and ``per_level`` the
    raw discrete values (one row per level).
    """

    values: np.ndarray
    residuals: np.ndarray | None = None
    errors: np.ndarray | None = None
    vectors: np.ndarray | None = None
    levels: tuple = ()
    per_level: np.ndarray | None = None
    shape: ShapeSpec | None = None
    dirichlet: tuple = ()
    suspicious: bool = False
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.values)

    def to_dict(self) -> dict:
        d = {
            "shape": self.shape.to_dict() if self.shape is not None else None,
            "dirichlet": list(self.dirichlet),
            "values": [float(x) for x in self.values],
            "errors": None if self.errors is None else [float(x) for x in self.errors],
            "levels": list(self.levels),
        }
        if self.per_level is not None:
            d["per_level"] = [[float(x) for x in row] for row in self.per_level]
        if self.residuals is not None:
            d["residuals"] = [float(x) for x in np.ravel(self.residuals)]
        d["suspicious"] = bool(self.suspicious)
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def relative_residuals(K, B, values, vectors) -> np.ndarray:
    """``||K x - lambda B x|| / (||B x|| * max(lambda, 1))`` per eigenpair."""
    out = np.empty(len(values))
    for i, lam in enumerate(values):
        x = vectors[:, i]
        bx = B @ x
        r = K @ x - lam * bx
        out[i] = np.linalg.norm(r) / (np.linalg.norm(bx) * max(abs(lam), 1.0))
    return out


def _ritz(K, B, V):
    """Rayleigh-Ritz on span(V): sorted values and B-orthonormal vectors."""
    KV = V.T @ (K @ V)
    BV = V.T @ (B @ V)
    KV = 0.5 * (KV + KV.T)
    BV = 0.5 * (BV + BV.T)
    w, y = la.eigh(KV, BV)
    return w, V @ y


def smallest_eigs(sys: AssembledSystem, k: int, tol: float = DEFAULT_TOL) -> Spectrum:
    """The ``k`` smallest generalized eigenpairs of ``(K, B)``.

    Uses shift-invert Lanczos with the shift ``-1/|area|`` (below the spectrum,
    so the factorization is definite even in the pure Neumann case); small
    systems are solved densely.
    """
    n = sys.dim
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if not 0 < tol <= 1e-3:
        raise ValueError("tol must lie in (0, 1e-3]")
    K, B = sys.K, sys.B
    if n <= DENSE_DIM:
        w, V = la.eigh(K.toarray(), B.toarray(), subset_by_index=[0, k - 1])
    else:
        sigma = -1.0 / sys.mesh.area
        nev = min(k + 2, n - 1)
        # fixed start vector: ARPACK's random default makes the last digits run-dependent
        v0 = np.random.default_rng(0).uniform(0.5, 1.5, n)
        try:
            w, V = sla.eigsh(K.tocsc(), k=nev, M=B.tocsc(), sigma=sigma, which="LM", v0=v0,
                             tol=min(1e-2 * tol, 1e-10), maxiter=MAX_ITER * nev)
        except sla.ArpackNoConvergence as e:
            raise EigensolverError(f"shift-invert Lanczos did not converge in {MAX_ITER} iterations "
                                   f"(dim={n}, k={k}, converged={len(e.eigenvalues)})") from None
        except (RuntimeError, ValueError) as e:
            raise EigensolverError(f"factorization of K - sigma B failed (sigma={sigma:g}): {e}") from None
        w, V = _ritz(K, B, V)
        w, V = w[:k], V[:, :k]
    res = relative_residuals(K, B, w, V)
    if np.any(res > tol):
        raise EigensolverError(f"relative residuals {res.max():.3g} above tolerance {tol:g}")
    return Spectrum(values=np.asarray(w), residuals=res, vectors=V,
                    levels=(sys.mesh.level,), dirichlet=tuple(sys.bc.sorted_labels()))


def richardson(per_level: np.ndarray, levels) -> tuple:
    """Extrapolate the last two levels assuming an error of ``C * 4**(-level)``.

    Returns ``(values, error_bars)`` with error bar ``|last level - extrapolation|``.
    """
    per_level = np.asarray(per_level, dtype=float)
    if per_level.shape[0] < 2:
        return per_level[-1].copy(), np.full(per_level.shape[1], np.nan)
    r = 4.0 ** (levels[-1] - levels[-2])
    fine, coarse = per_level[-1], per_level[-2]
    ext = (r * fine - coarse) / (r - 1.0)
    return ext, np.abs(fine - ext)


def solve_on_meshes(meshes, bc, k: int, tol: float = DEFAULT_TOL, shape=None, keep_vectors=False) -> Spectrum:
    """Discrete solves on nested meshes followed by Richardson extrapolation per index."""
    bc = BoundaryCondition.of(bc)
    levels = tuple(m.level for m in meshes)
    rows, last = [], None
    for m in meshes:
        sys = assemble(m, bc)
        last = smallest_eigs(sys, min(k, sys.dim), tol)
        vals = np.full(k, np.nan)
        vals[: len(last.values)] = last.values
        rows.append(vals)
    per_level = np.array(rows)
    notes = []
    if bc.is_neumann:
        per_level[:, 0] = 0.0
    ext, err = richardson(per_level, levels)
    if bc.is_neumann:
        ext[0], err[0] = 0.0, 0.0
    diffs = np.diff(per_level, axis=0)
    scale = np.maximum(np.abs(per_level[1:]), 1.0)
    bad = diffs > 1e-9 * scale
    suspicious = bool(np.any(bad))
    if suspicious:
        idx = sorted(set(np.nonzero(bad)[1].tolist()))
        notes.append(f"non-monotone level sequence for eigenvalue indices {[i + 1 for i in idx]}")
        log.warning("Rayleigh-Ritz decrease violated for %s", idx)
    return Spectrum(values=ext, errors=err, levels=levels, per_level=per_level, shape=shape,
                    dirichlet=tuple(bc.sorted_labels()),
                    suspicious=suspicious, notes=notes,
                    vectors=last.vectors if keep_vectors else None,
                    residuals=last.residuals)


def solve_mixed(s: ShapeSpec, bc, k: int = 1, levels=DEFAULT_LEVELS, tol: float = DEFAULT_TOL,
                keep_vectors: bool = False) -> Spectrum:
    """Extrapolated ``k`` smallest eigenvalues of the mixed problem on ``s``."""
    levels = tuple(sorted(levels))
    if len(levels) < 3 or any(b - a != 1 for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must span at least 3 consecutive refinement levels")
    bc = BoundaryCondition.of(bc).validate(s.labels)
    return solve_on_meshes(mesh_sequence(s, levels), bc, k, tol, shape=s, keep_vectors=keep_vectors)


def solve_neumann(s: ShapeSpec, k: int = 2, levels=DEFAULT_LEVELS, tol: float = DEFAULT_TOL) -> Spectrum:
    """Pure Neumann spectrum; the constant mode is reported as exactly 0."""
    return solve_mixed(s, BoundaryCondition(), k, levels, tol)
