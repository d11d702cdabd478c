import math

import numpy as np
import pytest

from holdercv.core import Curve, VariationalProblem
from holdercv.errors import DegenerateRadius, SpecError, SquareRootDomain
from holdercv.problems import (
    TABLE1_ROWS,
    arclength,
    brachistochrone,
    brachistochrone_line,
    catalog_entry,
    circle,
    constrained_slope,
    cubic,
    cycloid,
    cycloid_curve,
    fig1_bundle,
    fit_closed_form,
    fit_cycloid,
    line,
    logistic_path,
    shortest_path_ode_factor,
    snell_linear,
    snell_logistic,
    snell_reduced_slope,
    table1_matrix,
)
from holdercv.variational import Verdict, stationarity_residual


def test_shortest_path_factor():
    assert shortest_path_ode_factor(0.7, line(0, 1, 2.0, 1.0), 0.3) == 0.0
    assert shortest_path_ode_factor(0.5, line(0, 1, -math.sqrt(2), 0.0), 0.3) == pytest.approx(0.0)
    c = Curve.closed_form(0, 1, lambda x: x * x, lambda x: 2 * x, lambda x: 2 + 0 * x)
    assert shortest_path_ode_factor(1.0, c, 1.0) == 2.0


def test_cycloid_points():
    assert cycloid(1.0, math.pi) == pytest.approx((math.pi, 2.0))
    assert cycloid(1.0, math.pi / 2) == pytest.approx((math.pi / 2 - 1, 1.0))
    with pytest.raises(DegenerateRadius):
        cycloid(0.0, 1.0)
    with pytest.raises(DegenerateRadius):
        cycloid_curve(-1.0, 0.2, 1.0)


def test_cycloid_graph_matches_parametric_points():
    c = cycloid_curve(1.3, 0.2, 5.0, x_shift=0.4)
    theta = np.linspace(0.2, 5.0, 50)
    xs, us = cycloid(1.3, theta)
    np.testing.assert_allclose(c(xs + 0.4), us, atol=1e-12)
    g = cycloid_curve(1.3, 0.2, 5.0, x_shift=0.4, n=101)
    assert g.is_grid and g.nodes.size == 101
    np.testing.assert_allclose(g(g.nodes), c(g.nodes), atol=1e-12)


def test_fit_cycloid_through_endpoints():
    fit = fit_cycloid(0.0, 1.0, 5.0, 1.0)
    x = np.array([0.0, 5.0])
    xs, us = cycloid(fit.r, np.array([fit.theta_a, fit.theta_b]))
    np.testing.assert_allclose(xs + fit.x_shift, x, atol=1e-10)
    np.testing.assert_allclose(us, [1.0, 1.0], atol=1e-10)
    # equal heights: symmetric about the bottom of the arch
    assert fit.theta_a + fit.theta_b == pytest.approx(2 * math.pi, abs=1e-10)
    fit2 = fit_cycloid(0.0, 1.0, 5.0, 2.0)
    xs, us = cycloid(fit2.r, np.array([fit2.theta_a, fit2.theta_b]))
    np.testing.assert_allclose(us, [1.0, 2.0], atol=1e-10)


def test_snell_reduced_slopes():
    f = snell_linear()
    assert snell_reduced_slope(f, 2, 1.0, 2.0) == 4.0
    assert snell_reduced_slope(f, 1, 0.5, 1.0) == pytest.approx(0.5 / math.sqrt(0.75), rel=1e-15)
    assert snell_reduced_slope(f, 1, -0.5, 1.0) == pytest.approx(-0.57735026919, rel=1e-10)
    g = snell_logistic(2.0, 5.0)
    assert snell_reduced_slope(g, 2, 1.0, 5.0) == 0.5
    with pytest.raises(SquareRootDomain):
        snell_reduced_slope(f, 1, 0.5, 2.0)
    with pytest.raises(ValueError):
        snell_reduced_slope(f, 0, 0.5, 1.0)


def _closed_form_cases():
    rng_pts = lambda a, b: np.random.default_rng(5).uniform(a, b, 50)  # noqa: E731
    yield "arclength chord", VariationalProblem(arclength(), 0, 1, 0.3, -0.4, 3.0), line(0, 1, -0.7, 0.3), rng_pts(0, 1)
    s = constrained_slope(-2.0)
    yield "arclength constrained", VariationalProblem(arclength(), 0, 1, 0, s, -2.0), line(0, 1, s), rng_pts(0, 1)
    c = cycloid_curve(0.8, 0.5, 5.5)
    yield "cycloid", VariationalProblem(brachistochrone(), c.a, c.b, float(c(c.a)), float(c(c.b)), 1.0), c, rng_pts(c.a, c.b)
    c = cycloid_curve(0.8, 0.5, 5.5, n=2001)
    yield "cycloid resampled", VariationalProblem(brachistochrone(), c.a, c.b, float(c(c.a)), float(c(c.b)), 1.0), c, c.nodes[1:-1]
    for alpha in (2.0, 5.0):
        c = brachistochrone_line(alpha, 0.5, 4.0)
        yield f"brach line {alpha}", VariationalProblem(brachistochrone(), 0.5, 4.0, float(c(0.5)), float(c(4.0)), alpha), c, rng_pts(0.5, 4)
    c = circle(0.5, 1.0, 0.2, 1.9)
    yield "circle", VariationalProblem(snell_linear(), 0.2, 1.9, float(c(0.2)), float(c(1.9)), 1.0), c, rng_pts(0.2, 1.9)
    c = cubic(-0.7, 2.0, 0.5, 3.0)
    yield "cubic", VariationalProblem(snell_linear(), 0.5, 3.0, float(c(0.5)), float(c(3.0)), 2.0), c, rng_pts(0.5, 3)
    for beta in (0.2, 2.0):
        c = logistic_path(1.0, 0.0, beta, 5.0, 0.0, 10.0)
        yield f"logistic {beta}", VariationalProblem(snell_logistic(beta, 5.0), 0, 10, float(c(0.0)), float(c(10.0)), 2.0), c, rng_pts(0, 10)
    yield "snell line alpha 0", VariationalProblem(snell_linear(), 1, 2, 1, 3, 0.0), line(1, 2, 2.0, -1.0), rng_pts(1, 2)


@pytest.mark.parametrize("case", list(_closed_form_cases()), ids=lambda c: c[0])
def test_closed_forms_are_stationary(case):
    _, P, c, x = case
    tol = 1e-6 if c.is_grid else 1e-8
    assert np.max(np.abs(stationarity_residual(P, c, x))) < tol


def test_fit_closed_form_hits_endpoints():
    cases = [
        ("snell_linear", {}, "cubic", (0.5, 2.0, 0.1, 1.3, 2.0)),
        ("snell_linear", {}, "circle", (0.5, 1.5, 0.2, 1.0, 1.0)),
        ("snell_logistic", {"beta": 0.2}, "logistic", (0.0, 10.0, 0.0, 4.0, 2.0)),
        ("brachistochrone", {}, "cycloid", (0.0, 5.0, 1.0, 1.0, 1.0)),
    ]
    for name, params, form, (a, b, ua, ub, alpha) in cases:
        entry = catalog_entry(name, **params)
        P = VariationalProblem(entry.feature, a, b, ua, ub, alpha)
        c = fit_closed_form(entry, form, P)
        assert float(c(a)) == pytest.approx(ua, abs=1e-9)
        assert float(c(b)) == pytest.approx(ub, abs=1e-9)
        x = np.linspace(a, b, 50)[1:-1]
        assert np.max(np.abs(stationarity_residual(P, c, x))) < 1e-8


def test_fit_closed_form_rejects_wrong_alpha():
    entry = catalog_entry("snell_linear")
    P = VariationalProblem(entry.feature, 1, 2, 0, 1, 1.0)
    with pytest.raises(ValueError):
        fit_closed_form(entry, "cubic", P)


def test_catalog_lookup():
    assert catalog_entry("Arclength").name == "arclength"
    assert catalog_entry("snell_logistic", beta=0.2, x0=5).params == {"beta": 0.2, "x0": 5.0}
    assert catalog_entry("custom", hook="exp_x").feature.name == "exp_x"
    with pytest.raises(SpecError):
        catalog_entry("velodrome")
    with pytest.raises(SpecError):
        catalog_entry("custom", hook="nope")


@pytest.mark.parametrize("alpha", [-5.0, -1.0, 0.1, 0.5, 0.9])
def test_constrained_feature_value(alpha):
    s = constrained_slope(alpha)
    F = arclength()(0.0, 0.0, s)
    assert F == pytest.approx(math.sqrt(1 + 1 / (1 - alpha)), rel=1e-12)


def test_table1_structure():
    rows = table1_matrix()
    assert len(rows) == 11
    assert all(r.space == "Real" for r, _ in rows)
    assert {r.space for r in TABLE1_ROWS} == {"Real", "Complex"}
    assert sum(c.expected == Verdict.MINIMUM for _, c in rows) == 8
    for row, case in rows:
        assert row.expected_verdict == case.expected.value
        if case.branch == "SlopeConstrained" and case.alpha != 0:
            assert abs(case.slope) == pytest.approx(constrained_slope(case.alpha))


def test_fig1_bundle():
    b = fig1_bundle()
    assert len(b) == 10
    for alpha, s, d in b:
        assert abs(s) == pytest.approx(1 / math.sqrt(1 - alpha), rel=1e-15)
        assert s * 1.0 + d == pytest.approx(2.0)
        # negative slopes cross the u-axis above 2, positive below
        assert (d > 2) == (s < 0)
