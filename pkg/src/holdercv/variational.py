"""Generalized Euler-Lagrange residuals, conserved quantities and the
second-variation test for the Hoelder-mean functional.

For alpha != 0 the stationarity condition is

    F (F_u - d/dx F_p) - (alpha - 1) F_p dF/dx = 0

and for alpha = 0 it is the classical equation applied to ``ln F``. Total
derivatives along the curve are expanded with the chain rule, e.g.
``dF/dx = F_x + F_u u' + F_p u''``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Curve, VariationalProblem, quadrature_nodes
from .errors import AlphaZero, FlagMismatch, NotStationary

STATIONARITY_TOL = 1e-4
SV_REL_TOL = 1e-9


class Verdict(str, Enum):
    MINIMUM = "Minimum"
    MAXIMUM = "Maximum"
    INCONCLUSIVE = "Inconclusive"


class ConservedKind(str, Enum):
    BELTRAMI1 = "Beltrami1"
    BELTRAMI2 = "Beltrami2"
    IGNORABLE_U1 = "IgnorableU1"
    IGNORABLE_U2 = "IgnorableU2"
    LOG_BELTRAMI0 = "LogBeltrami0"
    LOG_IGNORABLE0 = "LogIgnorable0"

    @property
    def alpha(self) -> float:
        return {"1": 1.0, "2": 2.0, "0": 0.0}[self.value[-1]]

    @property
    def needs_x_free(self) -> bool:
        return "Beltrami" in self.value


@dataclass(frozen=True)
class Variation:
    """Admissible perturbation ``h(x) = sum_k c_k sin(k pi (x - a) / delta)``.

    Vanishes at both ends by construction; at least one coefficient must
    be nonzero.
    """

    coefficients: tuple
    a: float
    b: float

    def __post_init__(self):
        if not any(c != 0 for c in self.coefficients):
            raise ValueError("variation must be non-constant (some c_k != 0)")

    @classmethod
    def random(cls, rng, a, b, modes=8):
        c = rng.uniform(-1.0, 1.0, modes)
        while not np.any(c):
            c = rng.uniform(-1.0, 1.0, modes)
        return cls(tuple(float(v) for v in c), float(a), float(b))

    def _phase(self, x):
        k = np.arange(1, len(self.coefficients) + 1)
        w = k * np.pi / (self.b - self.a)
        return w, np.multiply.outer(np.asarray(x, dtype=float) - self.a, w)

    def h(self, x):
        _, t = self._phase(x)
        return np.sin(t) @ np.asarray(self.coefficients)

    def dh(self, x):
        w, t = self._phase(x)
        return np.cos(t) @ (np.asarray(self.coefficients) * w)


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    sample_values: tuple
    num_variations: int
    tolerance: float = 0.0

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "num_variations": self.num_variations,
            "tolerance": self.tolerance,
            "sample_values": list(self.sample_values),
        }


def _as_output(x, r):
    return float(r) if np.ndim(x) == 0 else r


def residual_at(feature, alpha, x, u, du, d2u):
    """Stationarity residual from pointwise state; routes on ``alpha``."""
    P = feature.partials(x, u, du)
    dF = P.Fx + P.Fu * du + P.Fp * d2u
    dFp = P.Fxp + P.Fup * du + P.Fpp * d2u
    if alpha == 0:
        return P.Fu / P.F - dFp / P.F + P.Fp * dF / (P.F * P.F)
    return P.F * (P.Fu - dFp) - (alpha - 1.0) * P.Fp * dF


def el_residual(problem: VariationalProblem, curve: Curve, x):
    """Generalized Euler-Lagrange residual at ``x`` (alpha != 0)."""
    if problem.alpha == 0:
        raise AlphaZero("alpha = 0 uses el_residual_alpha0")
    u, du, d2u = curve.derivatives(x)
    return _as_output(x, residual_at(problem.feature, problem.alpha, x, u, du, d2u))


def el_residual_alpha0(problem: VariationalProblem, curve: Curve, x):
    """``d(ln F)/du - d/dx d(ln F)/du'`` at ``x``.

    Equal to the alpha = 0 instance of the general residual divided by F**2.
    """
    u, du, d2u = curve.derivatives(x)
    return _as_output(x, residual_at(problem.feature, 0.0, x, u, du, d2u))


def stationarity_residual(problem: VariationalProblem, curve: Curve, x):
    if problem.alpha == 0:
        return el_residual_alpha0(problem, curve, x)
    return el_residual(problem, curve, x)


def conserved_quantity(problem: VariationalProblem, curve: Curve, x, kind):
    """First integral for an ignorable coordinate, matched to alpha.

    Beltrami kinds need ``F`` independent of ``x``; Ignorable kinds need it
    independent of ``u``.
    """
    kind = ConservedKind(kind)
    feature = problem.feature
    if kind.needs_x_free and feature.depends_on_x:
        raise FlagMismatch(f"{kind.value} needs a feature independent of x")
    if not kind.needs_x_free and feature.depends_on_u:
        raise FlagMismatch(f"{kind.value} needs a feature independent of u")
    if problem.alpha != kind.alpha:
        raise FlagMismatch(f"{kind.value} applies at alpha={kind.alpha}, got {problem.alpha}")
    u, du, _ = curve.derivatives(x)
    F = feature.value(x, u, du)
    Fp = feature.F_p(x, u, du)
    q = {
        ConservedKind.BELTRAMI1: du * Fp - F,
        ConservedKind.BELTRAMI2: du * Fp - F / 2,
        ConservedKind.IGNORABLE_U1: Fp,
        ConservedKind.IGNORABLE_U2: F * Fp,
        ConservedKind.LOG_BELTRAMI0: np.log(F) - du * Fp / F,
        ConservedKind.LOG_IGNORABLE0: Fp / F,
    }[kind]
    return _as_output(x, np.asarray(q, dtype=float) + 0 * np.asarray(x, dtype=float))


def _residual_nodes(curve: Curve, nodes):
    x, _ = quadrature_nodes(curve, nodes)
    # grid end samples carry one-sided derivatives and are not equations
    return x[1:-1] if curve.is_grid else x


def max_residual(problem, curve, nodes=None):
    x = _residual_nodes(curve, nodes)
    return float(np.max(np.abs(stationarity_residual(problem, curve, x))))


def require_stationary(problem, curve, nodes=None, tol=STATIONARITY_TOL):
    r = max_residual(problem, curve, nodes)
    if not r < tol:
        raise NotStationary(r, tol)
    return r


def _second_variation_terms(problem, curve, variation, nodes, alpha0_form):
    x, w = quadrature_nodes(curve, nodes)
    u, du, _ = curve.derivatives(x)
    P = problem.feature.partials(x, u, du)
    h, dh = variation.h(x), variation.dh(x)
    first = P.Fu * h + P.Fp * dh
    second = P.Fuu * h * h + 2 * P.Fup * h * dh + P.Fpp * dh * dh
    alpha = problem.alpha
    if alpha == 0 and alpha0_form == "sufficient":
        t1 = np.zeros_like(x)
        t2 = second / P.F
    else:
        # (1/alpha) d^2(F^alpha)/de^2; at alpha = 0 this is d^2(ln F)/de^2
        t1 = (alpha - 1.0) * P.F ** (alpha - 2.0) * first * first
        t2 = P.F ** (alpha - 1.0) * second
    value = w @ (t1 + t2) / problem.delta
    scale = w @ (np.abs(t1) + np.abs(t2)) / problem.delta
    return float(value), float(scale)


def second_variation(
    problem: VariationalProblem,
    curve: Curve,
    variation: Variation,
    nodes=None,
    alpha0_form="full",
    check=True,
):
    """Sign-carrying second variation of ``C_alpha`` along ``variation``.

    Returns ``(1/(alpha delta)) * integral d^2(F^alpha)/de^2 dx``, which has
    the sign of the true second variation. At alpha = 0 the default
    ``"full"`` form keeps the ``-(F_u h + F_p h')^2 / F^2`` term; pass
    ``alpha0_form="sufficient"`` for the reduced ``(1/F) * F-hessian`` test.
    """
    if alpha0_form not in ("full", "sufficient"):
        raise ValueError(f"unknown alpha0_form {alpha0_form!r}")
    if check:
        require_stationary(problem, curve, nodes)
    return _second_variation_terms(problem, curve, variation, nodes, alpha0_form)[0]


def classify(
    problem: VariationalProblem,
    curve: Curve,
    num_variations: int = 32,
    seed: int = 0,
    modes: int = 8,
    nodes=None,
    alpha0_form="full",
) -> Classification:
    """Sample random Fourier-sine variations and read off the sign pattern.

    A sample counts as zero when its magnitude is below ``1e-9`` times the
    largest integrated term magnitude, so exact cancellations (degenerate
    quadratic forms) come out Inconclusive rather than as roundoff signs.
    """
    require_stationary(problem, curve, nodes)
    rng = np.random.default_rng(seed)
    values, scales = [], []
    for _ in range(num_variations):
        v = Variation.random(rng, problem.a, problem.b, modes)
        val, sc = _second_variation_terms(problem, curve, v, nodes, alpha0_form)
        values.append(val)
        scales.append(sc)
    tol = SV_REL_TOL * max(scales)
    vals = np.asarray(values)
    if np.all(vals > tol):
        verdict = Verdict.MINIMUM
    elif np.all(vals < -tol):
        verdict = Verdict.MAXIMUM
    else:
        verdict = Verdict.INCONCLUSIVE
    return Classification(verdict, tuple(values), num_variations, tol)
