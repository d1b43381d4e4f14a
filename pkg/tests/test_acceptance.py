"""Acceptance suite: one recorded PASS/FAIL line per criterion, each at its stated tolerance."""
import itertools
import math
import time

import numpy as np

from specpoly.closedform import PI2, M, counting_x, rectangle_count_below, rectangle_spectrum, triangle_bounds
from specpoly.eigensolve import smallest_eigs, solve_mixed, solve_neumann, solve_on_meshes
from specpoly.fem import assemble
from specpoly.geometry import (
    TrapezoidParams,
    TriangleParams,
    rectangle,
    right_triangle,
    trapezoid_from_params,
    triangle_from_sides_angle,
)
from specpoly.mesh import mesh_sequence, triangulate
from specpoly.verify import (
    HOLDS,
    VIOLATED,
    check_thm3_ordering,
    check_thm8,
    check_thm9,
    minimize_functional,
    right_trapezoids,
    trapezoids,
)

RECT_SIDES = {("DD", "DD"): "left,right,bottom,top", ("DD", "NN"): "left,right", ("DD", "DN"): "left,right,bottom"}
RECTS = [(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]


def rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_01_rectangle_closed_forms(criterion):
    start = time.perf_counter()
    worst = 0.0
    for (a, b), pattern in itertools.product(RECTS, RECT_SIDES):
        exact = np.array(rectangle_spectrum(a, b, *pattern, 5))
        sp = solve_mixed(rectangle(a, b), RECT_SIDES[pattern], 5, levels=(4, 5, 6))
        worst = max(worst, float(np.max(np.abs(sp.values - exact) / exact)))
    elapsed = time.perf_counter() - start
    criterion(1, worst <= 2e-3 and elapsed < 60,
              f"rectangle eigenvalues 1-5, worst rel err {worst:.2e} (<= 2e-3), {elapsed:.1f} s (< 60 s)")


def test_criterion_02_isosceles_right_ms(criterion):
    v = solve_mixed(right_triangle(1, 1), "M,S").values[0]
    criterion(2, rel(v, 2 * PI2) <= 3e-3, f"lambda1^MS = {v:.6f} vs 2pi^2 = {2 * PI2:.6f}, rel {rel(v, 2 * PI2):.2e}")


def test_criterion_03_isosceles_right_l_and_mu2(criterion):
    t = right_triangle(1, 1)
    sl = solve_mixed(t, "L")
    sn = solve_neumann(t, 2)
    lam, err = sl.values[0], sl.errors[0]
    mu2, mu_err = sn.values[1], sn.errors[1]
    ok = rel(lam, PI2) <= 3e-3 and abs(lam - mu2) <= err + mu_err
    criterion(3, ok, f"lambda1^L = {lam:.6f} (rel {rel(lam, PI2):.2e}), |lambda1^L - mu2| = {abs(lam - mu2):.2e} "
                     f"<= {err + mu_err:.2e}")


def test_criterion_04_bound_comparison_numbers(criterion):
    a = triangle_bounds(TriangleParams(4.0, 3.0, 5 * math.pi / 12))
    b = triangle_bounds(TriangleParams(4.0, 2.0, 5 * math.pi / 12))
    checks = [(a.four_area, 23.18), (a.ell_sq, 18.7888), (b.four_area, 15.454), (b.ell_sq, 17.93)]
    ok = all(abs(got - want) <= 0.01 for got, want in checks)
    criterion(4, ok, "4|T|, l^2 = " + ", ".join(f"{got:.4f} (want {want})" for got, want in checks))


def test_criterion_05_area_bound_sweep(criterion, triangle_grid, area_bound_report):
    r = area_bound_report
    no_violation = all(i.verdict != VIOLATED for i in r.instances)
    params = [p for p, _ in triangle_grid]
    nearest = min(range(len(params)), key=lambda i: abs(params[i]["alpha"] - math.pi / 2) / (math.pi / 2)
                  + abs(math.log(params[i]["ratio"])))
    worst = r.min_margin()
    ok = len(r.instances) == 100 and no_violation and worst.index == nearest
    criterion(5, ok, f"{len(r.instances)} triangles, violations {sum(i.verdict == VIOLATED for i in r.instances)}, "
                     f"min margin at #{worst.index}, nearest isosceles right #{nearest}")


def test_criterion_06_side_bound_sweep(criterion, side_bound_report):
    r = side_bound_report
    bad = [i for i in r.instances if i.verdict == VIOLATED]
    worst = r.min_margin()
    criterion(6, len(r.instances) == 100 and not bad,
              f"{len(r.instances)} triangles, {len(bad)} below 4pi^2/l^2 beyond error "
              f"(worst margin {worst.margin:.3f} at alpha={worst.params['alpha']:.4f}, ratio={worst.params['ratio']:.4f})")


def test_criterion_07_ordering_chain(criterion):
    strict = check_thm3_ordering(0.6)
    all_strict = all(i.verdict == HOLDS for i in strict.instances)
    q = check_thm3_ordering(math.pi / 6).meta["quantities"]
    gap = abs(q["M"][0] - q["mu2"][0])
    within = gap <= q["M"][1] + q["mu2"][1]
    criterion(7, all_strict and within and len(strict.meta["quantities"]) == 9,
              f"alpha=0.6: {sum(i.verdict == HOLDS for i in strict.instances)}/{len(strict.instances)} strict; "
              f"alpha=pi/6: |M - mu2| = {gap:.2e} <= {q['M'][1] + q['mu2'][1]:.2e}")


def test_criterion_08_trapezoids(criterion):
    n_shapes, n_bad, rect_margins = 0, 0, []
    for h in (0.5, 1.0):
        fam = trapezoids(2.0, h)
        n_shapes += len(fam)
        for k in (1, 2):
            r = check_thm8(fam, k)
            n_bad += sum(i.verdict == VIOLATED for i in r.instances)
            rect_margins += [abs(i.margin) / i.bound for i in r.instances if i.flags["rectangle"]]
    ok = n_shapes == 50 and n_bad == 0 and len(rect_margins) == 4 and max(rect_margins) < 5e-3
    criterion(8, ok, f"{n_shapes} trapezoids x k in (1, 2): {n_bad} violations, "
                     f"rectangle rel margins {', '.join(f'{m:.1e}' for m in rect_margins)} (< 5e-3)")


def test_criterion_09_right_trapezoids(criterion):
    fam = right_trapezoids(1.0)
    r = check_thm9(fam)
    n_bad = sum(i.verdict == VIOLATED for i in r.instances)
    rect = [i for i in r.instances if i.flags["two_to_one_rectangle"]]
    margin = abs(rect[0].margin) / rect[0].bound if rect else math.inf
    ok = len(r.instances) == 50 and n_bad == 0 and len(rect) == 1 and margin < 5e-3
    criterion(9, ok, f"{len(r.instances)} right trapezoids: {n_bad} violations, 2:1 rectangle rel margin {margin:.1e}")


def brute_count(a, b, lam):
    n = int(math.ceil(max(a, b) * math.sqrt(max(lam, 0.0)) / math.pi)) + 2
    return sum(1 for i, j in itertools.product(range(1, n + 1), range(n + 1))
               if PI2 * (i * i / a**2 + j * j / b**2) <= lam)


def test_criterion_10_counting_function(criterion):
    sq = max(abs(M(x) - x * x) for x in np.linspace(0, 1, 200))
    inv = max(abs(M(counting_x(y)) - y) for y in np.linspace(0, 50, 501))
    m2 = abs(M(2.0) - 1.5625)
    rng = np.random.default_rng(20261014)
    mismatches = 0
    for _ in range(100):
        a, b = rng.uniform(0.3, 4.0, 2)
        lam = rng.uniform(0, 200)
        mismatches += rectangle_count_below(a, b, lam) != brute_count(a, b, lam)
    ok = sq <= 1e-12 and inv <= 1e-10 and m2 <= 1e-10 and mismatches == 0
    criterion(10, ok, f"|M(x)-x^2| {sq:.1e}, |M(x(y))-y| {inv:.1e}, |M(2)-1.5625| {m2:.1e}, "
                      f"count mismatches {mismatches}/100")


def test_criterion_11_minimizer(criterion):
    start = time.perf_counter()
    rep = minimize_functional("triangles", "lambda1-MS", 0.5)
    elapsed = time.perf_counter() - start
    good = [abs(r["descriptors"]["alpha"] / (math.pi / 2) - 1) <= 0.02 and abs(r["descriptors"]["ratio"] - 1) <= 0.02
            and rel(r["value"], 2 * PI2) <= 0.01 for r in rep.restarts]
    d = rep.descriptors
    criterion(11, len(good) == 5 and all(good) and elapsed < 600,
              f"{sum(good)}/5 restarts at alpha/(pi/2)={d['alpha'] / (math.pi / 2):.5f}, ratio={d['ratio']:.5f}, "
              f"value/2pi^2={rep.best_value / (2 * PI2):.5f}, {elapsed:.0f} s (< 600 s)")


def first_eig(shape, labels, level):
    return smallest_eigs(assemble(triangulate(shape, level), labels), 1).values[0]


def test_criterion_12_solver_properties(criterion):
    rng = np.random.default_rng(12)
    shapes = [right_triangle(1.0, 2.0), triangle_from_sides_angle(2.0, 1.0, 2.2),
              triangle_from_sides_angle(1.3, 1.0, 1.1), trapezoid_from_params(TrapezoidParams(1.0, 2.0, 0.7, 0.1))]
    # scaling covariance at a fixed mesh
    scale_err = 0.0
    for shape in shapes:
        t = float(rng.uniform(0.2, 5.0))
        labels = shape.labels[0]
        a = smallest_eigs(assemble(triangulate(shape, 4), labels), 3).values
        b = smallest_eigs(assemble(triangulate(shape.scaled(t), 4), labels), 3).values
        scale_err = max(scale_err, float(np.max(np.abs(b * t * t - a) / a)))
    # boundary-condition monotonicity on random nested pairs
    mono_bad = 0
    for _ in range(20):
        shape = shapes[rng.integers(len(shapes))]
        labels = list(shape.labels)
        big = [lab for lab in labels if rng.random() < 0.6] or [labels[0]]
        small = [lab for lab in big if rng.random() < 0.5]
        mono_bad += first_eig(shape, small, 4) > first_eig(shape, big, 4) * (1 + 1e-12)
    # Rayleigh-Ritz: nonincreasing over refinement and above the exact values
    rr_bad = 0
    for (a, b), pattern in itertools.product(RECTS, RECT_SIDES):
        exact = np.array(rectangle_spectrum(a, b, *pattern, 5))
        per = solve_on_meshes(mesh_sequence(rectangle(a, b), range(2, 7)), RECT_SIDES[pattern], 5).per_level
        rr_bad += bool(np.any(np.diff(per, axis=0) > 1e-10 * per[1:]) or np.any(per < exact * (1 - 1e-10)))
    ok = scale_err <= 1e-10 and mono_bad == 0 and rr_bad == 0
    criterion(12, ok, f"scaling rel err {scale_err:.1e} (<= 1e-10), BC monotonicity failures {mono_bad}/20, "
                      f"Rayleigh-Ritz failures {rr_bad}/9")
