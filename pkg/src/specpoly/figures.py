"""Static figures for reports, sweeps, meshes and minimizer traces.

Figures are built on the Agg canvas directly (no pyplot state), so they can
be rendered from worker threads.  Every function returns the Figure and,
when ``path`` is given, also writes it (format from the suffix).
"""
from __future__ import annotations

import math

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure

from .mesh import Mesh
from .verify.report import HOLDS, VIOLATED, WITHIN

VERDICT_COLORS = {HOLDS: "tab:green", WITHIN: "tab:orange", VIOLATED: "tab:red"}


def _figure(width=6.0, height=4.0, ncols=1):
    fig = Figure(figsize=(width, height), constrained_layout=True)
    FigureCanvasAgg(fig)
    axes = fig.subplots(1, ncols)
    return fig, axes


def _save(fig, path):
    if path is not None:
        fig.savefig(path, dpi=150)
    return fig


def plot_report(report, path=None) -> Figure:
    """Relative margin ``(computed - bound) / bound`` per instance with error bars, colored by verdict."""
    fig, ax = _figure()
    idx = np.array([inst.index for inst in report.instances])
    scale = np.array([abs(inst.bound) if inst.bound else 1.0 for inst in report.instances])
    margin = np.array([inst.margin for inst in report.instances]) / scale
    err = np.array([inst.tolerance for inst in report.instances]) / scale
    colors = [VERDICT_COLORS[inst.verdict] for inst in report.instances]
    finite = np.isfinite(margin)
    ax.errorbar(idx[finite], margin[finite], yerr=err[finite], fmt="none", ecolor="0.6", lw=0.8)
    ax.scatter(idx[finite], margin[finite], c=[c for c, f in zip(colors, finite) if f], s=14, zorder=3)
    ax.axhline(0.0, color="k", lw=0.8)
    # symlog keeps near-equality instances visible next to large margins
    if finite.any() and np.nanmax(np.abs(margin[finite])) > 0:
        floor = max(np.nanmin(np.abs(margin[finite][margin[finite] != 0]), initial=1e-6), 1e-8)
        ax.set_yscale("symlog", linthresh=floor)
    ax.set_xlabel("instance")
    ax.set_ylabel("relative margin")
    ax.set_title(f"{report.theorem}: {report.verdict}")
    for verdict, color in VERDICT_COLORS.items():
        ax.scatter([], [], c=color, s=14, label=verdict)
    ax.legend(loc="best", fontsize=8, frameon=False)
    return _save(fig, path)


def plot_sweep(x, columns: dict, xlabel="parameter", ylabel="eigenvalue", path=None, errors=None) -> Figure:
    """One curve per column of a sweep table."""
    fig, ax = _figure()
    x = np.asarray(x, dtype=float)
    for name, y in columns.items():
        y = np.asarray(y, dtype=float)
        if errors is not None and name in errors:
            ax.errorbar(x, y, yerr=np.asarray(errors[name], dtype=float), marker="o", ms=3, lw=1, label=name,
                        capsize=2)
        else:
            ax.plot(x, y, marker="o", ms=3, lw=1, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(columns) > 1:
        ax.legend(fontsize=8, frameon=False)
    return _save(fig, path)


def plot_mesh(mesh: Mesh, dirichlet=(), path=None) -> Figure:
    """Triangulation with Dirichlet boundary edges drawn thick and each side labeled."""
    fig, ax = _figure(5.0, 5.0)
    x, y = mesh.nodes[:, 0], mesh.nodes[:, 1]
    ax.triplot(x, y, mesh.elements, color="0.7", lw=0.4)
    dirichlet = set(dirichlet)
    for label in dict.fromkeys(mesh.boundary_labels):
        mask = np.array([lab == label for lab in mesh.boundary_labels])
        segs = mesh.nodes[mesh.boundary_edges[mask]]
        is_d = label in dirichlet
        ax.add_collection(LineCollection(segs, colors="tab:blue" if is_d else "tab:gray",
                                         linewidths=2.2 if is_d else 1.0))
        mid = segs.reshape(-1, 2).mean(axis=0)
        ax.annotate(label, mid, fontsize=9, ha="center", va="center",
                    bbox={"boxstyle": "round,pad=0.15", "fc": "white", "ec": "none", "alpha": 0.8})
    ax.set_aspect("equal")
    ax.set_title(f"level {mesh.level}: {mesh.n_elements} elements")
    return _save(fig, path)


def plot_convergence(spectrum, path=None) -> Figure:
    """Discrete eigenvalues per level against mesh size ``2**-level``, with the extrapolated limits."""
    fig, ax = _figure()
    levels = np.asarray(spectrum.levels, dtype=float)
    hsq = 4.0 ** (-levels)
    for i in range(spectrum.per_level.shape[1]):
        line, = ax.plot(hsq, spectrum.per_level[:, i], marker="o", ms=3, lw=1, label=f"k={i + 1}")
        if math.isfinite(spectrum.values[i]):
            ax.plot([0.0], [spectrum.values[i]], marker="*", ms=8, color=line.get_color())
    ax.set_xlabel("4^-level (proportional to h^2)")
    ax.set_ylabel("eigenvalue")
    ax.set_xlim(left=-0.02 * hsq.max())
    ax.legend(fontsize=8, frameon=False)
    return _save(fig, path)


def plot_trace(report, path=None) -> Figure:
    """Objective value per evaluation for every restart of a minimizer search."""
    fig, ax = _figure()
    best = report.best_value
    for r in range(len(report.restarts)):
        vals = np.array([t["value"] for t in report.trace if t["restart"] == r])
        vals = np.minimum.accumulate(np.where(np.isfinite(vals), vals, np.inf))
        ax.plot(np.arange(1, len(vals) + 1), vals - best + 1e-12 * abs(best), lw=1, label=f"restart {r}")
    ax.set_yscale("log")
    ax.set_xlabel("evaluation")
    ax.set_ylabel("best value so far minus final best")
    ax.set_title(f"{report.family}, {report.functional}")
    ax.legend(fontsize=8, frameon=False)
    return _save(fig, path)
