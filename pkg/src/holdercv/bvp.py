"""Two-point boundary value solver for the generalized Euler-Lagrange ODE.

Interior grid equations are the stationarity residual with ``u'`` and
``u''`` replaced by second-order central differences. Damped Newton with a
finite-difference tridiagonal Jacobian drives them to zero; the boundary
samples are never updated.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .core import Curve, VariationalProblem
from .errors import HolderCVError, SingularFeature, SolverDiverged
from .variational import Classification, ConservedKind, classify, residual_at


@dataclass(frozen=True)
class SolverConfig:
    grid_points: int = 401
    max_newton_iters: int = 100
    residual_tol: float = 1e-10
    initial_damping: float = 1.0
    min_damping: float = 2.0**-20
    u_floor: float = 1e-8
    fd_step: float = 1e-7

    def __post_init__(self):
        if self.grid_points < 11 or self.grid_points % 2 == 0:
            raise ValueError(f"grid_points must be odd and >= 11, got {self.grid_points}")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be >= 1")
        for name in ("residual_tol", "initial_damping", "min_damping", "u_floor", "fd_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SolveReport:
    curve: Curve
    final_residual_rms: float
    iterations: int
    converged: bool
    classification: Classification | None
    problem: VariationalProblem
    trace: tuple = field(default=())


def grid(problem: VariationalProblem, n: int) -> np.ndarray:
    return np.linspace(problem.a, problem.b, n)


def discrete_residual(problem: VariationalProblem, x, u):
    """Interior residuals for grid values ``u`` (boundary samples included)."""
    h = x[1] - x[0]
    du = (u[2:] - u[:-2]) / (2 * h)
    d2u = (u[2:] - 2 * u[1:-1] + u[:-2]) / (h * h)
    return residual_at(problem.feature, problem.alpha, x[1:-1], u[1:-1], du, d2u)


def _safe_residual(problem, x, u):
    try:
        r = discrete_residual(problem, x, u)
    except HolderCVError:
        return None
    return r if np.all(np.isfinite(r)) else None


def _jacobian_bands(problem, x, u, r0, fd_step):
    """Tridiagonal Jacobian of the interior residuals, in ``solve_banded`` layout.

    Unknowns ``i`` and ``i +- 3`` never share a residual row, so three
    perturbed evaluations recover every band.
    """
    m = u.size - 2
    ab = np.zeros((3, m))
    for color in range(3):
        cols = np.arange(color, m, 3)
        e = fd_step * (1.0 + np.abs(u[1:-1][cols]))
        up = u.copy()
        up[1 + cols] += e
        r = _safe_residual(problem, x, up)
        if r is None:
            raise SingularFeature("feature not evaluable while building the Jacobian")
        d = (r - r0)
        for j, ej in zip(cols, e):
            for i in (j - 1, j, j + 1):
                if 0 <= i < m:
                    # band row: 0 = super, 1 = main, 2 = sub
                    ab[1 + i - j, j] = d[i] / ej
    return ab


def _rms(r):
    return float(np.sqrt(np.mean(r * r)))


def _newton(problem, x, u, config):
    r = _safe_residual(problem, x, u)
    if r is None:
        raise SingularFeature("feature is not positive/finite on the initial guess")
    rms = _rms(r)
    trace = [rms]
    it = 0
    while rms > config.residual_tol:
        if it >= config.max_newton_iters:
            raise SolverDiverged("iteration cap reached", u, rms, it, trace)
        ab = _jacobian_bands(problem, x, u, r, config.fd_step)
        try:
            step = solve_banded((1, 1), ab, -r)
        except (np.linalg.LinAlgError, ValueError):
            raise SolverDiverged("singular Jacobian", u, rms, it, trace) from None
        lam = config.initial_damping
        while True:
            trial = u.copy()
            trial[1:-1] += lam * step
            rt = _safe_residual(problem, x, trial)
            if rt is not None and _rms(rt) < rms:
                break
            lam *= 0.5
            if lam < config.min_damping:
                raise SolverDiverged("damping floor reached", u, rms, it, trace)
        u, r, rms = trial, rt, _rms(rt)
        it += 1
        trace.append(rms)
    return u, rms, it, trace


def _guess_values(problem, x, guess, u_floor):
    if guess is None or guess == "chord":
        u = problem.ua + (problem.ub - problem.ua) * (x - problem.a) / problem.delta
    elif guess == "sag":
        u = problem.ua + (problem.ub - problem.ua) * (x - problem.a) / problem.delta
        u = u + 0.5 * np.sin(np.pi * (x - problem.a) / problem.delta)
    elif isinstance(guess, Curve):
        u = np.asarray(guess(x), dtype=float)
    else:
        raise ValueError(f"unknown initial guess {guess!r}")
    u = u.copy()
    u[0], u[-1] = problem.ua, problem.ub
    if problem.feature.singular_at_zero_u:
        u[1:-1] = np.maximum(u[1:-1], u_floor)
    return u


def effective_problem(problem: VariationalProblem, config: SolverConfig) -> VariationalProblem:
    """Problem with boundary values lifted to ``u_floor`` where ``F`` is singular at 0."""
    if not problem.feature.singular_at_zero_u:
        return problem
    return replace(
        problem,
        ua=max(problem.ua, config.u_floor),
        ub=max(problem.ub, config.u_floor),
    )


def solve_bvp(
    problem: VariationalProblem,
    config: SolverConfig | None = None,
    initial_guess=None,
    seed: int = 0,
    classify_result: bool = True,
) -> SolveReport:
    """Solve the stationarity ODE with ``u(a) = ua``, ``u(b) = ub``.

    ``initial_guess`` is ``None``/``"chord"`` (straight line), ``"sag"``
    (chord plus a half-sine bulge) or a :class:`Curve`. With the default,
    features that depend on ``u`` retry from the sagged guess when the
    chord stalls. Raises :class:`SolverDiverged` carrying the best iterate.
    """
    config = config or SolverConfig()
    problem = effective_problem(problem, config)
    x = grid(problem, config.grid_points)
    guesses = [initial_guess]
    if initial_guess is None and problem.feature.depends_on_u:
        guesses.append("sag")
    failure = None
    for guess in guesses:
        u0 = _guess_values(problem, x, guess, config.u_floor)
        try:
            u, rms, it, trace = _newton(problem, x, u0, config)
            break
        except SolverDiverged as exc:
            if failure is None or exc.residual_rms < failure.residual_rms:
                failure = exc
    else:
        failure.best = Curve.from_samples(x, failure.best, name="best iterate")
        raise failure
    curve = Curve.from_samples(x, u, name="bvp solution")
    cls = classify(problem, curve, seed=seed) if classify_result else None
    return SolveReport(curve, rms, it, True, cls, problem, tuple(trace))


def rk4(slope, x, u0, i0=0):
    """Classical RK4 for ``u' = slope(x, u)`` on the grid ``x`` from ``x[i0]``."""
    u = np.empty_like(x)
    u[i0] = u0
    for rng in (range(i0, x.size - 1), range(i0, 0, -1)):
        for i in rng:
            j = i + 1 if rng.step > 0 else i - 1
            h = x[j] - x[i]
            xi, ui = x[i], u[i]
            k1 = slope(xi, ui)
            k2 = slope(xi + h / 2, ui + h / 2 * k1)
            k3 = slope(xi + h / 2, ui + h / 2 * k2)
            k4 = slope(xi + h, ui + h * k3)
            u[j] = ui + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
    return u


def solve_ivp_reduced(
    problem: VariationalProblem,
    kind,
    constant_value: float,
    x0: float,
    u0: float,
    config: SolverConfig | None = None,
    slope=None,
) -> Curve:
    """Integrate the first-order ODE implied by a conserved quantity.

    ``slope(x, u)`` defaults to the catalog's reduced form for the
    problem's feature. ``x0`` must be a node of the uniform solver grid.
    """
    from .problems import reduced_slope

    kind = ConservedKind(kind)
    feature = problem.feature
    if kind.needs_x_free and feature.depends_on_x:
        raise ValueError(f"{kind.value} needs a feature independent of x")
    if not kind.needs_x_free and feature.depends_on_u:
        raise ValueError(f"{kind.value} needs a feature independent of u")
    if problem.alpha != kind.alpha:
        raise ValueError(f"{kind.value} applies at alpha={kind.alpha}")
    config = config or SolverConfig()
    x = grid(problem, config.grid_points)
    i0 = int(np.argmin(np.abs(x - x0)))
    if abs(x[i0] - x0) > 1e-12 * (1 + abs(x0)):
        raise ValueError(f"x0={x0} is not a node of the {config.grid_points}-point grid")
    g = slope or reduced_slope(feature, kind, constant_value)
    # evaluate once over the grid and half-steps so domain errors surface up front
    g(np.linspace(problem.a, problem.b, 2 * x.size - 1), 0.0)
    u = rk4(g, x, float(u0), i0)
    du = np.array([g(xi, ui) for xi, ui in zip(x, u)], dtype=float)
    return Curve.from_samples(x, u, du, np.gradient(du, x[1] - x[0], edge_order=2), name=f"reduced {kind.value}")
