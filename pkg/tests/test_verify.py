import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import jn_zeros

from specpoly.closedform import PI2, polya_lower_bound
from specpoly.eigensolve import solve_mixed
from specpoly.geometry import (
    RightTrapezoidParams,
    TrapezoidParams,
    TriangleParams,
    equilateral,
    make_triangle,
    right_trapezoid_from_params,
    right_triangle,
    trapezoid_from_params,
    triangle_from_params,
    triangle_from_sides_angle,
)
from specpoly.verify import (
    HOLDS,
    VIOLATED,
    WITHIN,
    Instance,
    SolverOptions,
    VerificationReport,
    check_symmetrization,
    check_thm3_ordering,
    check_thm4,
    check_thm5,
    check_thm6,
    check_thm8,
    check_thm9,
    explore_open_problem2,
    minimize_functional,
    parse_functional,
    right_trapezoids,
    right_triangle_with_angle,
    trapezoids,
    triangles_fixed_area,
)
from specpoly.verify.families import max_ratio, triangle_aspect

SCALENE = triangle_from_params(TriangleParams(4.0, 3.0, 5 * math.pi / 12))


def area_half(t):
    return t.scaled(math.sqrt(0.5 / t.area))


# -- verdict rules -----------------------------------------------------------

def test_verdict_classes():
    assert Instance(0, {}, 2.0, 0.1, 1.0).verdict == HOLDS
    assert Instance(0, {}, 1.05, 0.1, 1.0).verdict == WITHIN
    assert Instance(0, {}, 0.95, 0.1, 1.0).verdict == WITHIN
    assert Instance(0, {}, 0.85, 0.1, 1.0).verdict == VIOLATED
    assert Instance(0, {}, 1.0, 0.1, 1.05, expect="eq").verdict == WITHIN
    assert Instance(0, {}, 1.0, 0.1, 1.5, expect="eq").verdict == VIOLATED


@given(st.floats(-10, 10), st.floats(0, 5), st.floats(-10, 10), st.floats(0, 5))
def test_violated_only_below_both_error_bars(c, e, b, be):
    inst = Instance(0, {}, c, e, b, be)
    assert (inst.verdict == VIOLATED) == (c + e + be < b)


def test_report_aggregate_and_csv():
    r = VerificationReport("x", [Instance(0, {"a": 1.0}, 2.0, 0.1, 1.0), Instance(1, {"a": 2.0}, 1.0, 0.1, 1.0,
                                                                               flags={"f": True})])
    assert r.verdict == WITHIN
    assert r.min_margin().index == 1
    lines = r.to_csv().split("\n")
    assert lines[0] == "index,a,computed,error,bound,bound_error,margin,verdict,f"
    assert lines[2] == "1,2,1,0.1,1,0,0,holds-within-error,true"
    assert r.to_csv().endswith("\n") and "\r" not in r.to_csv()


# -- families ----------------------------------------------------------------

def test_triangle_grid_valid(triangle_grid):
    assert len(triangle_grid) == 100
    alphas = sorted({p["alpha"] for p, _ in triangle_grid})
    assert any(abs(a - math.pi / 2) < 1e-12 for a in alphas)
    for p, t in triangle_grid:
        assert t.area == pytest.approx(0.5, rel=1e-12)
        lengths = t.side_lengths
        assert triangle_aspect(p["alpha"], p["ratio"]) <= 20 * (1 + 1e-9)
        assert lengths["M"] / lengths["S"] == pytest.approx(p["ratio"], rel=1e-9)


def test_max_ratio_keeps_apex():
    for alpha in np.linspace(1.05, 3.0, 20):
        r = max_ratio(alpha)
        t = triangle_from_params(TriangleParams(r, 1.0, alpha))
        assert t.side_lengths["M"] / t.side_lengths["S"] == pytest.approx(r)


def test_trapezoid_family():
    fam = trapezoids(2.0, 1.0)
    assert len(fam) == 25
    for _, g in fam:
        assert g.mean_width == pytest.approx(2.0) and g.height == pytest.approx(1.0)


def test_right_trapezoid_family():
    fam = right_trapezoids()
    assert len(fam) == 50
    assert all(g.area == pytest.approx(1.0) for _, g in fam)
    two_to_one = [p for p, g in fam if p["taper"] == 1.0 and p["aspect"] == pytest.approx(2.0)]
    assert len(two_to_one) == 1


# -- area bound --------------------------------------------------------------

def test_area_bound_isosceles_right():
    r = check_thm4([area_half(right_triangle(1, 1))])
    inst = r.instances[0]
    assert inst.verdict == WITHIN
    assert inst.flags["equality_case"] and inst.flags["isosceles_right"]


def test_area_bound_equilateral_strict():
    inst = check_thm4([area_half(equilateral(1.0))]).instances[0]
    assert inst.verdict == HOLDS
    assert inst.computed > 2 * PI2
    assert not inst.flags["equality_case"]


def test_area_bound_scalene():
    inst = check_thm4([SCALENE]).instances[0]
    assert inst.bound == pytest.approx(PI2 / 5.7956, rel=1e-4)
    assert inst.verdict == HOLDS


def test_area_bound_rigidity_only_at_extremizer(area_bound_report):
    for inst in area_bound_report.instances:
        assert inst.flags["rigidity_ok"]
        if inst.flags["equality_case"]:
            assert inst.flags["isosceles_right"]


# -- right triangles with Dirichlet hypotenuse -------------------------------

def test_hypotenuse_bound_examples():
    r = check_thm5([right_triangle(1, 1), right_triangle(1, 2), right_triangle(1, 5)])
    a, b, c = r.instances
    assert a.verdict == WITHIN and a.computed == pytest.approx(PI2, rel=1e-3)
    assert b.bound == pytest.approx(PI2 / 2) and b.verdict == HOLDS
    assert c.bound == pytest.approx(PI2 / 5) and c.verdict == HOLDS


# -- longest-side bound ------------------------------------------------------

def test_side_bound_isosceles_right_tie():
    inst = check_thm6([right_triangle(1, 1)]).instances[0]
    assert inst.bound == pytest.approx(2 * PI2)
    assert inst.verdict == WITHIN
    assert inst.flags["cylinder_is_side_term"]


def test_side_bound_fails_on_equilateral():
    # the computed value is an upper bound; an independent one comes from the
    # inscribed disk of the doubled rhombus (Dirichlet monotonicity)
    inst = check_thm6([equilateral(1.0)]).instances[0]
    j01 = jn_zeros(0, 1)[0]
    r_in = math.sqrt(3) / 4
    assert inst.computed <= (j01 / r_in) ** 2
    assert (j01 / r_in) ** 2 < 4 * PI2
    assert inst.verdict == VIOLATED
    assert not inst.flags["cylinder_is_side_term"]
    assert inst.flags["clears_cylinder_gap"]


def test_side_bound_sas_m4_s2():
    t = triangle_from_sides_angle(4.0, 2.0, 5 * math.pi / 12)
    inst = check_thm6([t]).instances[0]
    assert inst.verdict == HOLDS
    assert inst.bound < PI2 / t.area


def test_side_bound_violations_need_high_altitude(side_bound_report):
    for inst in side_bound_report.instances:
        # the cylinder gap always bounds the eigenvalue from below
        assert inst.flags["clears_cylinder_gap"]
        if inst.verdict == VIOLATED:
            assert inst.flags["altitude"] > inst.flags["ell"] / 2


# -- ordering chain ----------------------------------------------------------

def test_chain_strict_at_06():
    r = check_thm3_ordering(0.6)
    assert len(r.instances) == 8
    assert all(inst.verdict == HOLDS for inst in r.instances)


def test_chain_half_equilateral():
    r = check_thm3_ordering(math.pi / 6)
    by_pair = {(i.params["lower"], i.params["upper"]): i for i in r.instances}
    assert by_pair[("M", "mu2")].expect == "eq" and by_pair[("M", "mu2")].verdict == WITHIN
    assert all(i.verdict == HOLDS for k, i in by_pair.items() if k != ("M", "mu2"))


def test_chain_isosceles_right():
    r = check_thm3_ordering(math.pi / 4)
    q = r.meta["quantities"]
    assert abs(q["L"][0] - PI2) <= q["L"][1]
    assert abs(q["mu2"][0] - PI2) <= q["mu2"][1]
    assert r.verdict != VIOLATED
    eq = {(i.params["lower"], i.params["upper"]) for i in r.instances if i.expect == "eq"}
    assert eq == {("S", "M"), ("mu2", "L"), ("LS", "LM")}


def test_chain_rejects_angle_outside_range():
    with pytest.raises(ValueError):
        check_thm3_ordering(0.4)
    with pytest.raises(ValueError):
        check_thm3_ordering(0.9)


def test_right_triangle_with_angle():
    t = right_triangle_with_angle(0.6)
    assert t.area == pytest.approx(0.5)
    lengths = t.side_lengths
    assert math.asin(lengths["S"] / lengths["L"]) == pytest.approx(0.6)


# -- conjectured chain -------------------------------------------------------

def test_conjecture_345():
    r = explore_open_problem2([make_triangle(((0, 0), (4, 0), (0, 3)))])
    assert [i.verdict for i in r.instances] == [HOLDS] * 3
    assert r.meta["exploration_only"]


def test_conjecture_near_equilateral():
    t = make_triangle(((0, 0), (1.0, 0), (0.52, 0.84)))
    r = explore_open_problem2([t])
    assert all(i.verdict == HOLDS for i in r.instances)
    assert r.instances[0].flags["mu2_above_L"]


def test_mu2_below_M_for_small_angle():
    r = explore_open_problem2([right_triangle_with_angle(0.45)])
    assert r.instances[0].flags["mu2_below_M"]


# -- trapezoids --------------------------------------------------------------

def test_trapezoid_rectangle_equality():
    g = trapezoid_from_params(TrapezoidParams(2.0, 2.0, 1.0))
    inst = check_thm8([g], 1).instances[0]
    assert inst.flags["equality_case"] and inst.flags["rectangle"]
    assert inst.verdict != VIOLATED


@pytest.mark.parametrize("p1, p2, k", [(1.5, 2.5, 1), (2.5, 3.5, 3)])
def test_trapezoid_examples(p1, p2, k):
    g = trapezoid_from_params(TrapezoidParams(p1, p2, 1.0))
    inst = check_thm8([g], k).instances[0]
    m = 0.5 * (p1 + p2)
    assert inst.bound == pytest.approx(PI2 * k * k / m**2)
    assert inst.bound == polya_lower_bound(k, 1.0, m)
    assert inst.flags["bound_matches_polya"]
    # at h k = m the bound sits on a double eigenvalue of the rectangle, so the margin is small
    assert inst.verdict in (HOLDS, WITHIN) and inst.margin > -inst.error


def test_trapezoid_hypothesis_enforced():
    with pytest.raises(ValueError, match="h/m"):
        check_thm8(trapezoids(2.0, 0.9), 3)


def test_right_trapezoid_two_to_one():
    g = right_trapezoid_from_params(RightTrapezoidParams(math.sqrt(2) / 2, math.sqrt(2) / 2, math.sqrt(2)))
    inst = check_thm9([g]).instances[0]
    assert inst.computed == pytest.approx(PI2, rel=1e-3)
    assert inst.flags["two_to_one_rectangle"] and inst.flags["equality_case"]


@pytest.mark.parametrize("l1, l2, h", [(1, 2, 1), (0.5, 1.5, 1)])
def test_right_trapezoid_examples(l1, l2, h):
    g = right_trapezoid_from_params(RightTrapezoidParams(l1, l2, h))
    inst = check_thm9([g]).instances[0]
    assert inst.bound == pytest.approx(PI2 / g.area)
    assert inst.verdict == HOLDS


# -- folding chain -----------------------------------------------------------

def test_fold_chain_isosceles_right():
    t = right_triangle(1, 1)
    r = check_symmetrization(t)
    a, b, c = r.instances
    target = PI2 / t.area
    for inst in (a, b):
        assert abs(inst.computed - target) <= inst.error
    assert b.bound == pytest.approx(target)
    assert c.verdict == WITHIN


@pytest.mark.parametrize("t", [make_triangle(((0, 0), (4, 0), (0, 3))), equilateral(1.0)], ids=["345", "equi"])
def test_fold_chain_strict(t):
    a, b, c = check_symmetrization(t).instances
    # the first link is an identity: the kite's first mode is symmetric
    assert a.flags["coincide"]
    assert b.verdict == HOLDS
    assert c.verdict == WITHIN


# -- determinism and concurrency ---------------------------------------------

def test_reports_deterministic_and_parallel_safe():
    fam = triangles_fixed_area(0.5, 3, 3)
    a = check_thm4(fam, SolverOptions(levels=(3, 4, 5)))
    b = check_thm4(fam, SolverOptions(levels=(3, 4, 5), workers=3))
    assert a.to_csv() == b.to_csv()


def test_solver_failure_is_not_a_pass(monkeypatch):
    from specpoly.eigensolve import EigensolverError
    from specpoly.verify import checks

    def fail(*a, **k):
        raise EigensolverError("forced")

    monkeypatch.setattr(checks, "solve_mixed", fail)
    inst = check_thm4([right_triangle(1, 1)]).instances[0]
    assert inst.flags["solver_failure"] == "forced"
    assert inst.verdict == VIOLATED


# -- minimizer ---------------------------------------------------------------

def test_parse_functional():
    assert parse_functional("lambda1-MS", ("L", "M", "S")) == (1, ("M", "S"))
    assert parse_functional("lambda1-l1l2w1", ("l1", "l2", "w1", "w2")) == (1, ("l1", "l2", "w1"))
    assert parse_functional("lambda2", ("L", "M", "S")) == (2, ("L", "M", "S"))
    assert parse_functional("mu2", ("L", "M", "S")) == (2, ())
    with pytest.raises(ValueError):
        parse_functional("lambda1-X", ("L", "M", "S"))
    with pytest.raises(ValueError):
        parse_functional("energy", ("L", "M", "S"))


def test_minimize_rectangles_square():
    rep = minimize_functional("rectangles", "lambda1", 1.0)
    assert rep.agree
    assert rep.descriptors["aspect"] == pytest.approx(1.0, rel=0.02)
    assert rep.best_value == pytest.approx(2 * PI2, rel=0.01)
    assert len(rep.restarts) == 5


def test_minimize_right_trapezoids():
    rep = minimize_functional("right-trapezoids", "lambda1-l1l2w1", 1.0)
    assert rep.agree
    assert rep.best_value == pytest.approx(PI2, rel=0.01)
    assert rep.descriptors["taper"] == pytest.approx(1.0, rel=0.02)
    assert rep.descriptors["length_to_width"] == pytest.approx(2.0, rel=0.02)


def test_minimize_rejects_unknown():
    with pytest.raises(ValueError):
        minimize_functional("pentagons", "lambda1", 1.0)
    with pytest.raises(ValueError):
        minimize_functional("triangles", "lambda1-P1", 1.0)


def test_minimize_failed_points_are_infinite():
    rep = minimize_functional("rectangles", "lambda1", 1.0, seeds=[(0.0,), (800.0,)], maxiter=20)
    assert any(math.isinf(t["value"]) for t in rep.trace)
    assert not rep.agree
    assert rep.best_value == pytest.approx(2 * PI2, rel=0.01)


def test_minimize_all_restarts_failing():
    from specpoly.eigensolve import EigensolverError

    with pytest.raises(EigensolverError):
        minimize_functional("rectangles", "lambda1", 1.0, seeds=[(800.0,)], maxiter=3)
