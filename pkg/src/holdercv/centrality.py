"""Hoelder-mean functional of a feature along a curve.

    C_alpha(u) = ((1/delta) * integral_a^b F(x, u, u')**alpha dx) ** (1/alpha)

with the geometric-mean limit at alpha = 0 and the inf/sup limits at
alpha = -inf/+inf.
"""
from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .core import Curve, VariationalProblem, check_curve, quadrature_nodes

ALPHA_SWITCH = 1e-8
LOG_SPACE_ALPHA = 500.0
# exp overflows just above 709
_EXP_SAFE = 700.0


def feature_along(problem: VariationalProblem, curve: Curve, nodes: int | None = None):
    """Quadrature nodes, Simpson weights and ``F`` sampled along ``curve``."""
    check_curve(problem, curve)
    x, w = quadrature_nodes(curve, nodes)
    u, du, _ = curve.derivatives(x)
    F = problem.feature.value(x, u, du)
    return x, w, F


def power_mean(log_f, weights, delta, alpha):
    """Weighted continuous power mean given ``ln F`` on the nodes."""
    alpha = float(alpha)
    if abs(alpha) < ALPHA_SWITCH:
        return float(np.exp(weights @ log_f / delta))
    t = alpha * log_f
    if abs(alpha) > LOG_SPACE_ALPHA or t.max() > _EXP_SAFE:
        return float(np.exp((logsumexp(t, b=weights) - np.log(delta)) / alpha))
    # weights sum to delta, so the mean of F**alpha is 1 + mean(expm1(t))
    return float(np.exp(np.log1p(weights @ np.expm1(t) / delta) / alpha))


def evaluate_centrality(problem: VariationalProblem, curve: Curve, nodes: int | None = None):
    """``C_alpha(u)`` for ``problem.alpha`` by composite Simpson quadrature.

    ``nodes`` defaults to 2001 for closed-form curves; grid curves with an
    odd sample count are integrated on their own samples.
    """
    _, w, F = feature_along(problem, curve, nodes)
    return power_mean(np.log(F), w, problem.delta, problem.alpha)


def centrality_alpha_sweep(problem: VariationalProblem, curve: Curve, alphas, nodes=None):
    """``[(alpha, C_alpha), ...]`` sharing one evaluation of ``F``."""
    alphas = [float(a) for a in alphas]
    if any(not np.isfinite(a) for a in alphas):
        raise ValueError("alphas must be finite")
    if any(b < a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be sorted ascending")
    _, w, F = feature_along(problem, curve, nodes)
    log_f = np.log(F)
    return [(a, power_mean(log_f, w, problem.delta, a)) for a in alphas]


def extremal_limits(problem: VariationalProblem, curve: Curve, nodes=None):
    """``(inf F, sup F)`` over the quadrature grid: the alpha -> -inf/+inf limits."""
    _, _, F = feature_along(problem, curve, nodes)
    return float(F.min()), float(F.max())
