"""Catalog of features with analytic partials, closed-form stationary
families, and the shortest-path classification table.

Sign convention for the brachistochrone: ``u`` is measured downward, so
``u(b) - u(a)`` is the height lost and the speed is proportional to
``sqrt(u)``; the ``1/sqrt(2 g)`` factor is dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import root

from .core import Curve, Feature, VariationalProblem
from .errors import DegenerateRadius, DomainMismatch, SquareRootDomain, SpecError
from .variational import ConservedKind, Verdict


def _zero(x, u, p):
    return 0.0 * (np.asarray(x) + np.asarray(u) + np.asarray(p))


# features --------------------------------------------------------------------


def arclength() -> Feature:
    """``F = sqrt(1 + u'^2)``."""

    def f(x, u, p):
        return np.sqrt(1.0 + np.square(p)) + 0 * np.asarray(x) + 0 * np.asarray(u)

    return Feature(
        f,
        name="arclength",
        f_u=_zero,
        f_p=lambda x, u, p: p / f(x, u, p),
        f_x=_zero,
        f_uu=_zero,
        f_up=_zero,
        f_pp=lambda x, u, p: f(x, u, p) ** -3,
        f_xp=_zero,
        depends_on_u=False,
        depends_on_x=False,
    )


def brachistochrone() -> Feature:
    """Travel-time density ``F = sqrt((1 + u'^2) / u)``, defined for ``u > 0``."""

    def f(x, u, p):
        u = np.asarray(u, dtype=float) + 0 * np.asarray(x)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(u > 0, np.sqrt((1.0 + np.square(p)) / np.where(u > 0, u, 1.0)), np.nan)

    def f_p(x, u, p):
        return p / (u * f(x, u, p))

    return Feature(
        f,
        name="brachistochrone",
        f_u=lambda x, u, p: -f(x, u, p) / (2 * u),
        f_p=f_p,
        f_x=_zero,
        f_uu=lambda x, u, p: 0.75 * f(x, u, p) / (u * u),
        f_up=lambda x, u, p: -f_p(x, u, p) / (2 * u),
        f_pp=lambda x, u, p: u ** -0.5 * (1.0 + np.square(p)) ** -1.5,
        f_xp=_zero,
        depends_on_u=True,
        depends_on_x=False,
        singular_at_zero_u=True,
    )


def snell(speed, dspeed, name="snell", params=None) -> Feature:
    """Fermat travel time ``F = sqrt(1 + u'^2) / c(x)`` for a speed ``c > 0``."""

    def s(p):
        return np.sqrt(1.0 + np.square(p))

    def f(x, u, p):
        return s(p) / speed(x) + 0 * np.asarray(u)

    return Feature(
        f,
        name=name,
        f_u=_zero,
        f_p=lambda x, u, p: p / (s(p) * speed(x)) + 0 * np.asarray(u),
        f_x=lambda x, u, p: -dspeed(x) * s(p) / speed(x) ** 2 + 0 * np.asarray(u),
        f_uu=_zero,
        f_up=_zero,
        f_pp=lambda x, u, p: 1.0 / (s(p) ** 3 * speed(x)) + 0 * np.asarray(u),
        f_xp=lambda x, u, p: -dspeed(x) * p / (s(p) * speed(x) ** 2) + 0 * np.asarray(u),
        depends_on_u=False,
        depends_on_x=True,
        params=dict(params or {}),
    )


def snell_linear() -> Feature:
    """Speed ``c(x) = x``; admissible only for ``x > 0``."""

    def c(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            return np.where(x > 0, x, np.nan)

    return snell(c, lambda x: 1.0 + 0 * np.asarray(x), name="snell_linear")


def logistic_speed_squared(x, beta, x0):
    """``c^2(x) = e^{beta (x - x0)} / (1 + e^{beta (x - x0)})``."""
    return 0.5 * (1.0 + np.tanh(0.5 * beta * (np.asarray(x, dtype=float) - x0)))


def snell_logistic(beta=2.0, x0=5.0) -> Feature:
    """Smooth two-medium speed ``c(x) = sqrt(logistic(beta (x - x0)))``."""
    if not beta > 0:
        raise ValueError("beta must be positive")

    def c(x):
        return np.sqrt(logistic_speed_squared(x, beta, x0))

    def dc(x):
        # d ln c / dx = beta (1 - c^2) / 2
        return c(x) * 0.5 * beta * (1.0 - logistic_speed_squared(x, beta, x0))

    return snell(c, dc, name="snell_logistic", params={"beta": beta, "x0": x0})


def exp_x() -> Feature:
    """``F = e^x``: depends on x only. Used as a test hook."""
    return Feature(
        lambda x, u, p: np.exp(x) + 0 * np.asarray(u) + 0 * np.asarray(p),
        name="exp_x",
        f_u=_zero,
        f_p=_zero,
        f_x=lambda x, u, p: np.exp(x) + 0 * np.asarray(u) + 0 * np.asarray(p),
        f_uu=_zero,
        f_up=_zero,
        f_pp=_zero,
        f_xp=_zero,
        depends_on_u=False,
        depends_on_x=True,
    )


HOOKS: dict[str, Callable[[], Feature]] = {"exp_x": exp_x}


# curves ------------------------------------------------------------------------


def line(a, b, s, d=0.0) -> Curve:
    """``u = s x + d`` on ``[a, b]``."""
    return Curve.closed_form(
        a, b, lambda x: s * x + d, lambda x: s + 0 * x, lambda x: 0 * x, name=f"line s={s}"
    )


def constrained_slope(alpha) -> float:
    """Magnitude ``1/sqrt(1 - alpha)`` of the slope-constrained lines (alpha < 1)."""
    if not alpha < 1:
        raise ValueError("slope-constrained lines are real only for alpha < 1")
    return 1.0 / math.sqrt(1.0 - alpha)


def shortest_path_ode_factor(alpha, curve: Curve, x):
    """``u''(1 + (alpha - 1) u'^2)`` for the arclength feature."""
    _, du, d2u = curve.derivatives(x)
    r = d2u * (1.0 + (alpha - 1.0) * du * du)
    return float(r) if np.ndim(x) == 0 else r


def cycloid(r, theta):
    """Point ``(r (theta - sin theta), r (1 - cos theta))``."""
    if not r > 0:
        raise DegenerateRadius(f"cycloid radius must be positive, got {r}")
    theta = np.asarray(theta, dtype=float)
    x = r * (theta - np.sin(theta))
    u = r * (1.0 - np.cos(theta))
    if x.ndim == 0:
        return float(x), float(u)
    return x, u


def _invert_cycloid(r, xs, lo, hi):
    """theta with ``r (theta - sin theta) = xs`` on the monotone branch [lo, hi]."""
    xs = np.asarray(xs, dtype=float)
    tlo = np.full(xs.shape, lo)
    thi = np.full(xs.shape, hi)
    for _ in range(64):
        mid = 0.5 * (tlo + thi)
        left = r * (mid - np.sin(mid)) < xs
        tlo = np.where(left, mid, tlo)
        thi = np.where(left, thi, mid)
    t = 0.5 * (tlo + thi)
    for _ in range(2):
        g = r * (t - np.sin(t)) - xs
        dg = r * (1.0 - np.cos(t))
        t = np.clip(t - g / dg, lo, hi)
    return t


def cycloid_curve(r, theta_min, theta_max, x_shift=0.0, n=None) -> Curve:
    """Cycloid arch as a graph ``u(x)`` over ``theta in [theta_min, theta_max]``.

    ``x(theta)`` is strictly increasing on ``(0, 2 pi)``, so the graph is
    recovered by monotone inversion of ``x(theta)``; derivatives come from
    the parametric form. With ``n`` the curve is resampled onto a uniform
    x-grid of ``n`` nodes carrying exact derivative samples.
    """
    if not r > 0:
        raise DegenerateRadius(f"cycloid radius must be positive, got {r}")
    if not 0 < theta_min < theta_max < 2 * np.pi:
        raise ValueError("need 0 < theta_min < theta_max < 2 pi")
    a = x_shift + r * (theta_min - np.sin(theta_min))
    b = x_shift + r * (theta_max - np.sin(theta_max))

    def state(x):
        t = _invert_cycloid(r, np.asarray(x, dtype=float) - x_shift, theta_min, theta_max)
        c = 1.0 - np.cos(t)
        return r * c, np.sin(t) / c, -1.0 / (r * c * c)

    if n is None:
        return Curve.closed_form(
            a, b, lambda x: state(x)[0], lambda x: state(x)[1], lambda x: state(x)[2],
            name=f"cycloid r={r}",
        )
    xs = np.linspace(a, b, n)
    u, du, d2u = state(xs)
    return Curve.from_samples(xs, u, du, d2u, name=f"cycloid r={r} n={n}")


@dataclass(frozen=True)
class CycloidFit:
    r: float
    theta_a: float
    theta_b: float
    x_shift: float
    residual: float

    def curve(self, n=None) -> Curve:
        return cycloid_curve(self.r, self.theta_a, self.theta_b, self.x_shift, n=n)


def fit_cycloid(a, ua, b, ub, tol=1e-10) -> CycloidFit:
    """Cycloid with cusp on ``u = 0`` through ``(a, ua)`` and ``(b, ub)``.

    Solves the two endpoint equations for ``(theta_a, theta_b)`` with the
    radius eliminated via ``r = ua / (1 - cos theta_a)``.
    """
    if not (ua > 0 and ub > 0 and b > a):
        raise ValueError("cycloid fit needs ua, ub > 0 and b > a")

    def eqs(t):
        ta, tb = t
        r = ua / (1.0 - np.cos(ta))
        return [
            r * (1.0 - np.cos(tb)) - ub,
            r * ((tb - np.sin(tb)) - (ta - np.sin(ta))) - (b - a),
        ]

    best = None
    for ta0 in np.linspace(0.2, np.pi, 8):
        for tb0 in np.linspace(ta0 + 0.2, 2 * np.pi - 0.1, 8):
            sol = root(eqs, [ta0, tb0], tol=1e-14)
            ta, tb = sol.x
            if not (0 < ta < tb < 2 * np.pi):
                continue
            res = float(np.max(np.abs(eqs(sol.x))))
            if best is None or res < best[0]:
                best = (res, ta, tb)
    if best is None or best[0] > tol:
        raise ValueError(f"no cycloid through ({a}, {ua}) and ({b}, {ub})")
    res, ta, tb = best
    r = ua / (1.0 - np.cos(ta))
    return CycloidFit(float(r), float(ta), float(tb), float(a - r * (ta - np.sin(ta))), res)


# reduced first-order forms for the Snell features ----------------------------


def _speed_squared(feature: Feature, x):
    x = np.asarray(x, dtype=float)
    if feature.name == "snell_linear":
        # c^2 = x^2 stays finite at x = 0 even though F does not
        return x * x
    if feature.name == "snell_logistic":
        return logistic_speed_squared(x, feature.params["beta"], feature.params["x0"])
    raise ValueError(f"no reduced slope for feature {feature.name!r}")


def snell_reduced_slope(feature: Feature, alpha, k, x):
    """Slope ``u'`` of the stationary curves with first integral ``k``.

    alpha = 1: ``F_p = k`` gives ``u' = k c / sqrt(1 - k^2 c^2)``.
    alpha = 2: ``F F_p = k`` gives ``u' = k c^2``.
    """
    c2 = _speed_squared(feature, x)
    if alpha == 1:
        disc = 1.0 - k * k * c2
        if np.any(disc <= 0):
            raise SquareRootDomain(f"1 - k^2 c^2 <= 0 for k={k} on the requested x")
        out = k * np.sqrt(c2) / np.sqrt(disc)
    elif alpha == 2:
        out = k * c2
    else:
        raise ValueError("reduced Snell slope is available for alpha in {1, 2}")
    return float(out) if np.ndim(x) == 0 else out


def reduced_slope(feature: Feature, kind, k):
    """``g(x, u)`` for the first-order ODE ``u' = g`` implied by a first integral."""
    kind = ConservedKind(kind)
    alpha = {ConservedKind.IGNORABLE_U1: 1, ConservedKind.IGNORABLE_U2: 2}.get(kind)
    if alpha is None or feature.name not in ("snell_linear", "snell_logistic"):
        raise ValueError(f"no reduced slope for {kind.value} on {feature.name!r}")
    return lambda x, u: snell_reduced_slope(feature, alpha, k, x)


# closed forms ----------------------------------------------------------------


def circle(k, p, a, b, branch=1.0) -> Curve:
    """``u = p - branch * sqrt(k^-2 - x^2)``: the alpha = 1, c(x) = x family."""
    R2 = 1.0 / (k * k)
    if R2 - max(a * a, b * b) <= 0:
        raise SquareRootDomain("circle leaves its valid x-range")

    def root_(x):
        return np.sqrt(R2 - np.square(x))

    return Curve.closed_form(
        a, b,
        lambda x: p - branch * root_(x),
        lambda x: branch * x / root_(x),
        lambda x: branch * R2 / root_(x) ** 3,
        name="circle",
    )


def cubic(k, p, a, b) -> Curve:
    """``u = k x^3 / 3 + p``: the alpha = 2, c(x) = x family."""
    return Curve.closed_form(
        a, b, lambda x: k * x**3 / 3 + p, lambda x: k * x * x, lambda x: 2 * k * x, name="cubic"
    )


def logistic_path(k, p, beta, x0, a, b) -> Curve:
    """``u = k ln(1 + e^{beta (x - x0)}) / beta + p``: alpha = 2, logistic speed."""

    def u(x):
        return k * np.logaddexp(0.0, beta * (np.asarray(x) - x0)) / beta + p

    def du(x):
        return k * logistic_speed_squared(x, beta, x0)

    def d2u(x):
        s = logistic_speed_squared(x, beta, x0)
        return k * beta * s * (1.0 - s)

    return Curve.closed_form(a, b, u, du, d2u, name="logistic")


def brachistochrone_line(alpha, a, b) -> Curve:
    """Stationary line ``u = x / sqrt(alpha - 1)`` for alpha > 1, x > 0."""
    if not alpha > 1:
        raise ValueError("stationary brachistochrone line needs alpha > 1")
    return line(a, b, 1.0 / math.sqrt(alpha - 1.0), 0.0)


@dataclass(frozen=True)
class ClosedForm:
    name: str
    alpha_condition: str
    applies: Callable[[float], bool]
    anchor: str


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    feature: Feature
    params: dict = field(default_factory=dict)
    closed_forms: tuple = ()


_ARCLENGTH_FORMS = (
    ClosedForm("chord", "any alpha", lambda a: True, "u'' = 0 branch"),
    ClosedForm("constrained", "alpha < 1", lambda a: a < 1, "1 + (alpha - 1) u'^2 = 0 branch"),
)
_BRACH_FORMS = (
    ClosedForm("cycloid", "alpha = 1", lambda a: a == 1, "x = r(t - sin t), u = r(1 - cos t)"),
    ClosedForm("stationary_line", "alpha > 1", lambda a: a > 1, "u = x / sqrt(alpha - 1)"),
)
_SNELL_LINEAR_FORMS = (
    ClosedForm("circle", "alpha = 1", lambda a: a == 1, "(u - p)^2 + x^2 = k^-2"),
    ClosedForm("cubic", "alpha = 2", lambda a: a == 2, "u = k x^3 / 3 + p"),
    ClosedForm("chord", "alpha = 0", lambda a: a == 0, "u'' (1 - u'^2) = 0"),
)
_SNELL_LOGISTIC_FORMS = (
    ClosedForm("logistic", "alpha = 2", lambda a: a == 2, "u = k ln(1 + e^{beta(x - x0)}) / beta + p"),
    ClosedForm("chord", "alpha = 0", lambda a: a == 0, "u'' (1 - u'^2) = 0"),
)

CATALOG_NAMES = ("arclength", "brachistochrone", "snell_linear", "snell_logistic", "custom")


def catalog_entry(name: str, **params) -> CatalogEntry:
    """Entry by (case-insensitive) name. ``custom`` needs ``hook=...``."""
    key = name.lower()
    if key == "arclength":
        return CatalogEntry(key, arclength(), {}, _ARCLENGTH_FORMS)
    if key == "brachistochrone":
        return CatalogEntry(key, brachistochrone(), {}, _BRACH_FORMS)
    if key == "snell_linear":
        return CatalogEntry(key, snell_linear(), {}, _SNELL_LINEAR_FORMS)
    if key == "snell_logistic":
        beta = float(params.get("beta", 2.0))
        x0 = float(params.get("x0", 5.0))
        return CatalogEntry(key, snell_logistic(beta, x0), {"beta": beta, "x0": x0}, _SNELL_LOGISTIC_FORMS)
    if key == "custom":
        hook = params.get("hook")
        if hook not in HOOKS:
            raise SpecError(f"unknown custom hook {hook!r}; available: {sorted(HOOKS)}")
        return CatalogEntry("custom", HOOKS[hook](), {"hook": hook}, (
            ClosedForm("chord", "any alpha", lambda a: True, "feature independent of u"),
        ))
    raise SpecError(f"unknown problem {name!r}; available: {list(CATALOG_NAMES)}")


def fit_closed_form(entry: CatalogEntry, form: str, problem: VariationalProblem) -> Curve:
    """Member of a closed-form family through the problem's endpoints."""
    a, b, ua, ub, alpha = problem.a, problem.b, problem.ua, problem.ub, problem.alpha
    forms = {f.name: f for f in entry.closed_forms}
    if form != "chord" and form not in forms:
        raise ValueError(f"{entry.name} has no closed form {form!r}; have {sorted(forms)}")
    if form in forms and not forms[form].applies(alpha):
        raise ValueError(f"closed form {form!r} needs {forms[form].alpha_condition}")
    if form == "chord":
        return problem.chord()
    if form == "constrained":
        s = (ub - ua) / (b - a)
        m = constrained_slope(alpha)
        if not math.isclose(abs(s), m, rel_tol=1e-9):
            raise DomainMismatch(f"endpoints give slope {s}, constrained slope is +-{m}")
        return problem.chord()
    if form == "cycloid":
        return fit_cycloid(a, ua, b, ub).curve()
    if form == "stationary_line":
        return brachistochrone_line(alpha, a, b)
    if form == "cubic":
        k = 3.0 * (ub - ua) / (b**3 - a**3)
        return cubic(k, ua - k * a**3 / 3, a, b)
    if form == "logistic":
        beta, x0 = entry.params["beta"], entry.params["x0"]
        L = lambda x: np.logaddexp(0.0, beta * (x - x0)) / beta  # noqa: E731
        k = (ub - ua) / (L(b) - L(a))
        return logistic_path(k, ua - k * L(a), beta, x0, a, b)
    if form == "circle":
        if ua == ub:
            raise ValueError("circle centred on the u-axis needs ua != ub")
        p = (b * b - a * a + ub * ub - ua * ua) / (2.0 * (ub - ua))
        if (ua - p) * (ub - p) <= 0:
            raise ValueError("endpoints lie on different half-circles")
        branch = 1.0 if ua < p else -1.0
        k = 1.0 / math.sqrt(a * a + (ua - p) ** 2)
        return circle(k, p, a, b, branch)
    raise ValueError(form)


# classification table ----------------------------------------------------------


@dataclass(frozen=True)
class Table1Row:
    alpha_range: str
    ode_branch: str  # "LineFree" (u'' = 0) or "SlopeConstrained"
    feature_value: str
    expected_verdict: str
    slope_condition: str
    space: str  # "Real" or "Complex"


@dataclass(frozen=True)
class Table1Case:
    alpha: float
    branch: str
    slope: float
    expected: Verdict

    def problem(self) -> VariationalProblem:
        return VariationalProblem(arclength(), 0.0, 1.0, 0.0, self.slope, self.alpha)

    def curve(self) -> Curve:
        return line(0.0, 1.0, self.slope, 0.0)


TABLE1_ROWS = (
    Table1Row(">2", "SlopeConstrained", "sqrt(1 + 1/(alpha - 1))", "Minimum", "u' = -+i/sqrt(alpha - 1)", "Complex"),
    Table1Row(">2", "LineFree", "sqrt(1 + s^2)", "Minimum", "any s", "Real"),
    Table1Row("2", "SlopeConstrained", "0", "Minimum", "u' = -+i", "Complex"),
    Table1Row("2", "LineFree", "sqrt(1 + s^2)", "Minimum", "any s", "Real"),
    Table1Row("]1,2[", "SlopeConstrained", "undefined", "undefined", "u' = -+i/sqrt(alpha - 1)", "Complex"),
    Table1Row("]1,2[", "LineFree", "sqrt(1 + s^2)", "Minimum", "any s", "Real"),
    Table1Row("1", "LineFree", "sqrt(1 + s^2)", "Minimum", "any s", "Real"),
    Table1Row("]0,1[", "SlopeConstrained", "sqrt(1 + 1/(1 - alpha))", "Maximum", "s = -+1/sqrt(1 - alpha)", "Real"),
    Table1Row("]0,1[", "LineFree", "sqrt(1 + s^2)", "Minimum", "s^2 < 1", "Real"),
    Table1Row("0", "LineFree", "sqrt(1 + s^2)", "Minimum", "s in ]-1,1[", "Real"),
    Table1Row("0", "LineFree", "sqrt(1 + s^2)", "Maximum", "|s| > 1", "Real"),
    Table1Row("0", "SlopeConstrained", "sqrt(2)", "Inconclusive", "s = -+1", "Real"),
    Table1Row("<0", "SlopeConstrained", "sqrt(1 + 1/(1 - alpha))", "Minimum", "s = -+1/sqrt(1 - alpha)", "Real"),
    Table1Row("<0", "LineFree", "sqrt(1 + s^2)", "Minimum", "s in ]-1,1[", "Real"),
)


def table1_matrix():
    """Executable ``(row, case)`` pairs for the real-space rows."""
    real = [r for r in TABLE1_ROWS if r.space == "Real"]
    by_key = {(r.alpha_range, r.ode_branch, r.expected_verdict): r for r in real}
    M, X, I = Verdict.MINIMUM, Verdict.MAXIMUM, Verdict.INCONCLUSIVE
    cases = [
        (">2", "LineFree", Table1Case(3.0, "LineFree", 0.5, M)),
        ("2", "LineFree", Table1Case(2.0, "LineFree", 1.0, M)),
        ("]1,2[", "LineFree", Table1Case(1.5, "LineFree", 2.0, M)),
        ("1", "LineFree", Table1Case(1.0, "LineFree", 0.7, M)),
        ("]0,1[", "SlopeConstrained", Table1Case(0.5, "SlopeConstrained", -constrained_slope(0.5), X)),
        ("]0,1[", "LineFree", Table1Case(0.5, "LineFree", 0.5, M)),
        ("0", "LineFree", Table1Case(0.0, "LineFree", 0.5, M)),
        ("0", "LineFree", Table1Case(0.0, "LineFree", 2.0, X)),
        ("0", "SlopeConstrained", Table1Case(0.0, "SlopeConstrained", 1.0, I)),
        ("<0", "SlopeConstrained", Table1Case(-1.0, "SlopeConstrained", -constrained_slope(-1.0), M)),
        ("<0", "LineFree", Table1Case(-1.0, "LineFree", 0.5, M)),
    ]
    return [(by_key[(rng, br, c.expected.value)], c) for rng, br, c in cases]


FIG1_ALPHAS = (0.1, 0.3, 0.5, 0.9, 0.95)


def fig1_bundle(alphas=FIG1_ALPHAS, point=(1.0, 2.0)):
    """Slope-constrained line pairs through ``point``: ``[(alpha, slope, intercept)]``."""
    px, py = point
    out = []
    for a in alphas:
        m = constrained_slope(a)
        for s in (-m, m):
            out.append((float(a), s, py - s * px))
    return out
