import threading

import pytest

from specpoly.eigensolve import solve_mixed
from specpoly.figures import plot_convergence, plot_mesh, plot_report, plot_sweep, plot_trace
from specpoly.geometry import right_triangle
from specpoly.mesh import triangulate
from specpoly.verify import Instance, VerificationReport, minimize_functional

PNG = b"\x89PNG\r\n\x1a\n"


def is_png(path):
    return path.read_bytes()[:8] == PNG


def sample_report():
    return VerificationReport("x", [Instance(0, {}, 2.0, 0.1, 1.0), Instance(1, {}, 1.0, 0.1, 1.0),
                                    Instance(2, {}, 0.5, 0.1, 1.0)])


def test_report_figure(tmp_path):
    path = tmp_path / "r.png"
    plot_report(sample_report(), path)
    assert is_png(path)


def test_sweep_figure_svg(tmp_path):
    path = tmp_path / "s.svg"
    plot_sweep([0, 1, 2], {"lambda_1": [1.0, 2.0, 3.0]}, "x", "value", path, errors={"lambda_1": [0.1] * 3})
    assert path.read_text(encoding="utf-8").lstrip().startswith("<?xml")


def test_mesh_figure(tmp_path):
    path = tmp_path / "m.png"
    plot_mesh(triangulate(right_triangle(1, 2), 2), ["M", "S"], path)
    assert is_png(path)


def test_convergence_and_trace_figures(tmp_path):
    sp = solve_mixed(right_triangle(1, 1), "M,S", 2, levels=(2, 3, 4))
    plot_convergence(sp, tmp_path / "c.png")
    rep = minimize_functional("right-triangles", "lambda1-MS", 0.5, levels=(2, 3, 4), maxiter=10)
    plot_trace(rep, tmp_path / "t.png")
    assert is_png(tmp_path / "c.png") and is_png(tmp_path / "t.png")


def test_figures_thread_safe(tmp_path):
    errors = []

    def work(i):
        try:
            plot_report(sample_report(), tmp_path / f"r{i}.png")
        except Exception as e:  # pragma: no cover - surfaced below
            errors.append(e)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert all(is_png(tmp_path / f"r{i}.png") for i in range(4))


def test_unwritable_figure_path(tmp_path):
    with pytest.raises(OSError):
        plot_report(sample_report(), tmp_path / "no" / "dir" / "r.png")
