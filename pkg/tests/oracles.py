"""Independent reference computations. Nothing here calls the code under test."""
import numpy as np


def riemann_centrality(f, u, du, a, b, alpha, n=10**6):
    """Midpoint-rule power mean of ``f(x, u(x), u'(x))`` on ``n`` cells."""
    x = a + (np.arange(n) + 0.5) * (b - a) / n
    F = f(x, u(x), du(x))
    if alpha == 0:
        return float(np.exp(np.mean(np.log(F))))
    return float(np.mean(F**alpha) ** (1.0 / alpha))


def exp_power_mean(alpha):
    """Closed form of the power mean of e^x on [0, 1]."""
    if alpha == 0:
        return float(np.exp(0.5))
    return float(((np.exp(alpha) - 1.0) / alpha) ** (1.0 / alpha))


def perturbed_centrality_second_derivative(f, u, du, h, dh, a, b, alpha, eps=1e-3, n=200001):
    """``d^2/de^2 C_alpha(u + e h)`` at 0 by a central difference in ``e``.

    The functional is integrated with the trapezoid rule on a dense grid.
    """
    x = np.linspace(a, b, n)
    w = np.full(n, (b - a) / (n - 1))
    w[0] = w[-1] = w[0] / 2

    def C(e):
        F = f(x, u(x) + e * h(x), du(x) + e * dh(x))
        if alpha == 0:
            return np.exp(w @ np.log(F) / (b - a))
        return (w @ F**alpha / (b - a)) ** (1.0 / alpha)

    return (C(eps) - 2 * C(0.0) + C(-eps)) / eps**2, C(0.0)


def central_difference(g, v, h=1e-5):
    return (g(v + h) - g(v - h)) / (2 * h)
