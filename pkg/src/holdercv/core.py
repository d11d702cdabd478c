"""Domain types: features, curves and variational problems.

A feature is the positive integrand ``F(x, u, u')``. Everything here is
vectorized: ``x``, ``u`` and ``p`` (the slope ``u'``) may be numpy arrays
that broadcast together.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, NamedTuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import DomainMismatch, NonPositiveFeature

PARTIAL_NAMES = ("f_u", "f_p", "f_x", "f_uu", "f_up", "f_pp", "f_xp")

# base step of the 5-point stencils, scaled by max(1, |v|)
FD_STEP = 1e-3


class Partials(NamedTuple):
    F: np.ndarray
    Fu: np.ndarray
    Fp: np.ndarray
    Fx: np.ndarray
    Fuu: np.ndarray
    Fup: np.ndarray
    Fpp: np.ndarray
    Fxp: np.ndarray


def _step(v):
    return FD_STEP * np.maximum(1.0, np.abs(v))


def _d1(g, v):
    """Fourth-order central first derivative of ``g`` at ``v``."""
    h = _step(v)
    return (g(v - 2 * h) - 8 * g(v - h) + 8 * g(v + h) - g(v + 2 * h)) / (12 * h)


def _d2(g, v):
    """Fourth-order central second derivative of ``g`` at ``v``."""
    h = _step(v)
    return (
        -g(v - 2 * h) + 16 * g(v - h) - 30 * g(v) + 16 * g(v + h) - g(v + 2 * h)
    ) / (12 * h * h)


@dataclass(frozen=True)
class Feature:
    """Positive integrand ``F(x, u, p)`` with optional analytic partials.

    Missing partials fall back to central finite differences. ``f_xp`` is
    the mixed x/p partial, needed to expand ``d/dx dF/dp`` along a curve.
    """

    f: Callable
    name: str = "custom"
    f_u: Callable | None = None
    f_p: Callable | None = None
    f_x: Callable | None = None
    f_uu: Callable | None = None
    f_up: Callable | None = None
    f_pp: Callable | None = None
    f_xp: Callable | None = None
    depends_on_u: bool = True
    depends_on_x: bool = True
    singular_at_zero_u: bool = False
    params: Mapping = field(default_factory=dict)

    @property
    def analytic_partials(self) -> bool:
        return all(getattr(self, n) is not None for n in PARTIAL_NAMES)

    def numerical(self) -> "Feature":
        """Copy of this feature with every partial computed by finite differences."""
        return replace(self, **{n: None for n in PARTIAL_NAMES})

    def __call__(self, x, u, p):
        return self.f(x, u, p)

    def value(self, x, u, p):
        """``F`` with the positivity check applied."""
        with np.errstate(invalid="ignore", divide="ignore"):
            F = np.asarray(self.f(x, u, p), dtype=float)
        bad = ~(F > 0) | ~np.isfinite(F)
        if np.any(bad):
            xb = np.broadcast_to(np.asarray(x, dtype=float), F.shape)
            i = np.flatnonzero(bad)[0]
            raise NonPositiveFeature(float(xb.flat[i]), float(F.flat[i]))
        return F

    # first partials -------------------------------------------------------

    def F_u(self, x, u, p):
        if self.f_u is not None:
            return self.f_u(x, u, p)
        return _d1(lambda v: self.f(x, v, p), u)

    def F_p(self, x, u, p):
        if self.f_p is not None:
            return self.f_p(x, u, p)
        return _d1(lambda v: self.f(x, u, v), p)

    def F_x(self, x, u, p):
        if self.f_x is not None:
            return self.f_x(x, u, p)
        return _d1(lambda v: self.f(v, u, p), x)

    # second partials ------------------------------------------------------

    def F_uu(self, x, u, p):
        if self.f_uu is not None:
            return self.f_uu(x, u, p)
        return _d2(lambda v: self.f(x, v, p), u)

    def F_pp(self, x, u, p):
        if self.f_pp is not None:
            return self.f_pp(x, u, p)
        return _d2(lambda v: self.f(x, u, v), p)

    def F_up(self, x, u, p):
        if self.f_up is not None:
            return self.f_up(x, u, p)
        return _d1(lambda v: self.F_p(x, v, p), u)

    def F_xp(self, x, u, p):
        if self.f_xp is not None:
            return self.f_xp(x, u, p)
        return _d1(lambda v: self.F_p(v, u, p), x)

    def partials(self, x, u, p) -> Partials:
        x, u, p = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, u, p)))
        F = self.value(x, u, p)

        def full(g):
            return np.broadcast_to(np.asarray(g(x, u, p), dtype=float), F.shape)

        return Partials(
            F,
            full(self.F_u),
            full(self.F_p),
            full(self.F_x),
            full(self.F_uu),
            full(self.F_up),
            full(self.F_pp),
            full(self.F_xp),
        )


class Curve:
    """Twice differentiable ``u(x)`` on ``[a, b]``.

    Two representations: closed form (callables for u, u', u'') and a grid
    of uniformly spaced samples. Grid curves without supplied derivative
    samples get second-order finite differences, one-sided at the ends.
    """

    def __init__(self, a, b, u, du, d2u, *, nodes=None, name="curve"):
        if not a < b:
            raise ValueError(f"curve domain needs a < b, got [{a}, {b}]")
        self.a = float(a)
        self.b = float(b)
        self._u = u
        self._du = du
        self._d2u = d2u
        self.nodes = nodes
        self.name = name
        self._splines = None

    @classmethod
    def closed_form(cls, a, b, u, du, d2u, name="closed-form"):
        return cls(a, b, u, du, d2u, name=name)

    @classmethod
    def from_samples(cls, x, u, du=None, d2u=None, name="grid"):
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        n = x.size
        if n < 3 or u.shape != x.shape:
            raise ValueError("grid curve needs n >= 3 samples with matching shapes")
        h = (x[-1] - x[0]) / (n - 1)
        if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0.0):
            raise ValueError("grid samples must be uniformly spaced")
        if du is None:
            du = np.gradient(u, h, edge_order=2)
        if d2u is None:
            d2u = _second_difference(u, h)
        du = np.asarray(du, dtype=float)
        d2u = np.asarray(d2u, dtype=float)
        return cls(x[0], x[-1], u, du, d2u, nodes=x, name=name)

    @property
    def is_grid(self) -> bool:
        return self.nodes is not None

    @property
    def delta(self) -> float:
        return self.b - self.a

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        tol = 1e-12 * (self.b - self.a)
        if np.any(x < self.a - tol) or np.any(x > self.b + tol):
            raise DomainMismatch(f"x outside curve domain [{self.a}, {self.b}]")
        return np.clip(x, self.a, self.b)

    def derivatives(self, x):
        """``(u, u', u'')`` at ``x``."""
        x = self._check(x)
        if not self.is_grid:
            return (
                np.asarray(self._u(x), dtype=float) + 0 * x,
                np.asarray(self._du(x), dtype=float) + 0 * x,
                np.asarray(self._d2u(x), dtype=float) + 0 * x,
            )
        if x.shape == self.nodes.shape and np.array_equal(x, self.nodes):
            return self._u.copy(), self._du.copy(), self._d2u.copy()
        if self._splines is None:
            self._splines = (
                CubicHermiteSpline(self.nodes, self._u, self._du),
                CubicHermiteSpline(self.nodes, self._du, self._d2u),
                CubicSpline(self.nodes, self._d2u),
            )
        su, sdu, sd2u = self._splines
        return su(x), sdu(x), sd2u(x)

    def __call__(self, x):
        return self.derivatives(x)[0]

    def values(self):
        """Grid samples ``(x, u)``; only for grid curves."""
        if not self.is_grid:
            raise TypeError("closed-form curve has no samples")
        return self.nodes.copy(), self._u.copy()

    def __repr__(self):
        kind = f"grid n={self.nodes.size}" if self.is_grid else "closed-form"
        return f"Curve({self.name!r}, [{self.a}, {self.b}], {kind})"


def _second_difference(u, h):
    d2 = np.empty_like(u)
    d2[1:-1] = (u[2:] - 2 * u[1:-1] + u[:-2]) / (h * h)
    if u.size >= 4:
        d2[0] = (2 * u[0] - 5 * u[1] + 4 * u[2] - u[3]) / (h * h)
        d2[-1] = (2 * u[-1] - 5 * u[-2] + 4 * u[-3] - u[-4]) / (h * h)
    else:
        d2[0] = d2[-1] = d2[1]
    return d2


@dataclass(frozen=True)
class VariationalProblem:
    """Feature, interval, boundary values ``u(a)=ua, u(b)=ub`` and exponent."""

    feature: Feature
    a: float
    b: float
    ua: float
    ub: float
    alpha: float

    def __post_init__(self):
        if not self.b - self.a > 0:
            raise ValueError(f"problem needs b > a, got a={self.a}, b={self.b}")

    @property
    def delta(self) -> float:
        return self.b - self.a

    def with_alpha(self, alpha) -> "VariationalProblem":
        return replace(self, alpha=float(alpha))

    def chord(self) -> Curve:
        """Straight line from ``(a, ua)`` to ``(b, ub)``."""
        s = (self.ub - self.ua) / self.delta
        a, ua = self.a, self.ua
        return Curve.closed_form(
            self.a,
            self.b,
            lambda x: ua + s * (x - a),
            lambda x: s + 0 * x,
            lambda x: 0 * x,
            name="chord",
        )


def check_curve(problem: VariationalProblem, curve: Curve, tol=1e-9):
    if abs(curve.a - problem.a) > tol or abs(curve.b - problem.b) > tol:
        raise DomainMismatch(
            f"curve domain [{curve.a}, {curve.b}] != problem domain [{problem.a}, {problem.b}]"
        )
    ua, ub = curve(np.array([curve.a, curve.b]))
    if abs(ua - problem.ua) > tol or abs(ub - problem.ub) > tol:
        raise DomainMismatch(
            f"curve boundary values ({ua}, {ub}) != problem values ({problem.ua}, {problem.ub})"
        )


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights for ``n`` (odd) equally spaced nodes."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Simpson needs an odd node count >= 3, got {n}")
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def quadrature_nodes(curve: Curve, nodes: int | None):
    """Nodes and Simpson weights on the curve domain.

    Grid curves with an odd sample count reuse their own nodes unless a
    count is requested explicitly.
    """
    if nodes is None and curve.is_grid and curve.nodes.size % 2 == 1:
        x = curve.nodes
    else:
        n = nodes if nodes is not None else 2001
        x = np.linspace(curve.a, curve.b, n)
    return x, simpson_weights(x.size, (x[-1] - x[0]) / (x.size - 1))
