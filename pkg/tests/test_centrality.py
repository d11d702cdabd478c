import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holdercv.centrality import (
    ALPHA_SWITCH,
    centrality_alpha_sweep,
    evaluate_centrality,
    extremal_limits,
)
from holdercv.core import Curve, Feature, VariationalProblem
from holdercv.errors import DomainMismatch, NonPositiveFeature
from holdercv.problems import arclength, exp_x, line

from oracles import exp_power_mean, riemann_centrality


def exp_problem(alpha=0.0):
    return VariationalProblem(exp_x(), 0.0, 1.0, 0.0, 0.0, alpha)


def parabola():
    return Curve.closed_form(0, 1, lambda x: x * x, lambda x: 2 * x, lambda x: 2 + 0 * x)


def arc_parabola(alpha):
    return VariationalProblem(arclength(), 0.0, 1.0, 0.0, 1.0, alpha)


@pytest.mark.parametrize("alpha", [-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 7.0])
def test_constant_feature_gives_the_constant(alpha):
    P = VariationalProblem(arclength(), 0.0, 1.0, 0.0, 1.0, alpha)
    assert evaluate_centrality(P, P.chord()) == pytest.approx(math.sqrt(2), rel=1e-14)


def test_geometric_mean_of_exp():
    P = exp_problem(0.0)
    assert evaluate_centrality(P, P.chord()) == pytest.approx(1.64872127070013, rel=1e-12)


def test_quadratic_mean_of_parabola_arclength():
    assert evaluate_centrality(arc_parabola(2.0), parabola()) == pytest.approx(math.sqrt(7 / 3), rel=1e-12)


def test_sweep_on_exp_against_closed_form():
    P = exp_problem()
    rows = centrality_alpha_sweep(P, P.chord(), [-50, 0, 1, 50])
    for a, c in rows:
        assert c == pytest.approx(exp_power_mean(a), rel=1e-9)
    values = [c for _, c in rows]
    assert 1 < values[0] < values[1] < values[2] < values[3] < math.e
    assert values[2] == pytest.approx(math.e - 1, rel=1e-12)


def test_sweep_on_parabola_against_riemann_oracle():
    f = arclength()
    rows = centrality_alpha_sweep(arc_parabola(1.0), parabola(), [-1, 0, 1, 2])
    values = [c for _, c in rows]
    assert all(b > a for a, b in zip(values, values[1:]))
    for a, c in rows:
        ref = riemann_centrality(f, lambda x: x * x, lambda x: 2 * x, 0, 1, a)
        assert c == pytest.approx(ref, rel=1e-9)


def test_sweep_rejects_unsorted_or_infinite():
    P = exp_problem()
    with pytest.raises(ValueError):
        centrality_alpha_sweep(P, P.chord(), [1, 0])
    with pytest.raises(ValueError):
        centrality_alpha_sweep(P, P.chord(), [0, math.inf])


def test_constant_feature_sweep_is_flat():
    P = VariationalProblem(arclength(), 0.0, 1.0, 0.0, 1.0, 1.0)
    values = [c for _, c in centrality_alpha_sweep(P, P.chord(), np.linspace(-20, 20, 41))]
    assert max(values) - min(values) < 1e-12


def test_extremal_limits():
    P = exp_problem()
    lo, hi = extremal_limits(P, P.chord())
    assert (lo, hi) == (pytest.approx(1.0), pytest.approx(math.e))
    lo, hi = extremal_limits(arc_parabola(1.0), parabola())
    assert (lo, hi) == (pytest.approx(1.0), pytest.approx(math.sqrt(5)))
    Q = VariationalProblem(arclength(), 0.0, 1.0, 0.0, 0.0, 1.0)
    assert extremal_limits(Q, Q.chord()) == (1.0, 1.0)
    for alpha, bound in ((1e3, hi), (-1e3, lo)):
        c = evaluate_centrality(arc_parabola(alpha), parabola())
        assert abs(c - bound) / bound < 0.01


def test_extreme_alpha_does_not_overflow():
    big = line(0, 1, 1e3, 0)
    P = VariationalProblem(arclength(), 0.0, 1.0, 0.0, 1e3, 400.0)
    c = evaluate_centrality(P, big)
    assert np.isfinite(c) and c == pytest.approx(math.sqrt(1 + 1e6), rel=1e-12)


def test_errors():
    P = exp_problem()
    with pytest.raises(DomainMismatch):
        evaluate_centrality(VariationalProblem(exp_x(), 0, 2, 0, 0, 1.0), P.chord())
    neg = Feature(lambda x, u, p: x - 0.5)
    with pytest.raises(NonPositiveFeature):
        evaluate_centrality(VariationalProblem(neg, 0, 1, 0, 0, 1.0), P.chord())


# properties -----------------------------------------------------------------------

coeffs = st.tuples(st.floats(-2, 2), st.floats(-2, 2)).filter(lambda c: abs(c[0]) + abs(c[1]) > 0.1)


def poly_case(c):
    """Arclength feature on ``u = c0 x^2 + c1 x^3``: non-constant F."""
    c0, c1 = c
    curve = Curve.closed_form(
        0, 1, lambda x: c0 * x**2 + c1 * x**3, lambda x: 2 * c0 * x + 3 * c1 * x**2,
        lambda x: 2 * c0 + 6 * c1 * x,
    )
    return VariationalProblem(arclength(), 0.0, 1.0, 0.0, c0 + c1, 1.0), curve


@given(c=coeffs)
@settings(max_examples=30, deadline=None)
def test_p1_small_alpha_matches_geometric_branch(c):
    P, curve = poly_case(c)
    g = evaluate_centrality(P.with_alpha(0.0), curve)
    near = evaluate_centrality(P.with_alpha(1e-6), curve)
    tiny = evaluate_centrality(P.with_alpha(ALPHA_SWITCH / 2), curve)
    assert abs(near - g) / g < 1e-5
    assert tiny == g


@given(c=coeffs, a1=st.floats(-20, 20), a2=st.floats(-20, 20))
@settings(max_examples=60, deadline=None)
def test_p2_strictly_increasing(c, a1, a2):
    if abs(a1 - a2) < 1e-3:
        return
    lo, hi = sorted((a1, a2))
    P, curve = poly_case(c)
    assert evaluate_centrality(P.with_alpha(lo), curve) < evaluate_centrality(P.with_alpha(hi), curve)


@given(c=coeffs, alpha=st.floats(-1e3, 1e3))
@settings(max_examples=60, deadline=None)
def test_p3_p4_bounded_by_extremes(c, alpha):
    P, curve = poly_case(c)
    lo, hi = extremal_limits(P, curve)
    v = evaluate_centrality(P.with_alpha(alpha), curve)
    assert lo * (1 - 1e-12) <= v <= hi * (1 + 1e-12)


@given(c=coeffs, alpha=st.floats(-20, 20))
@settings(max_examples=30, deadline=None)
def test_quadrature_node_doubling(c, alpha):
    P, curve = poly_case(c)
    v1 = evaluate_centrality(P.with_alpha(alpha), curve, nodes=2001)
    v2 = evaluate_centrality(P.with_alpha(alpha), curve, nodes=4001)
    assert abs(v1 - v2) / v2 < 1e-8
