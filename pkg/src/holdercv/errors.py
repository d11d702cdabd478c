"""Exception hierarchy shared by every module."""


class HolderCVError(Exception):
    """Base class for all library errors."""


class NonPositiveFeature(HolderCVError, ValueError):
    def __init__(self, x, value=None):
        self.x = x
        self.value = value
        msg = f"feature is not positive at x={x!r}"
        if value is not None:
            msg += f" (F={value!r})"
        super().__init__(msg)


class DomainMismatch(HolderCVError, ValueError):
    pass


class AlphaZero(HolderCVError, ValueError):
    pass


class FlagMismatch(HolderCVError, ValueError):
    pass


class NotStationary(HolderCVError, ValueError):
    def __init__(self, max_residual, tol):
        self.max_residual = max_residual
        self.tol = tol
        super().__init__(
            f"curve is not stationary: max |residual| = {max_residual:.3e} >= {tol:.1e}"
        )


class SingularFeature(HolderCVError, ValueError):
    pass


class SquareRootDomain(HolderCVError, ValueError):
    pass


class DegenerateRadius(HolderCVError, ValueError):
    pass


class SolverDiverged(HolderCVError, RuntimeError):
    """Newton iteration gave up. ``best`` holds the lowest-residual iterate."""

    def __init__(self, reason, best=None, residual_rms=float("nan"), iterations=0, trace=()):
        self.reason = reason
        self.best = best
        self.residual_rms = residual_rms
        self.iterations = iterations
        self.trace = list(trace)
        super().__init__(f"{reason} (rms={residual_rms:.3e} after {iterations} iterations)")


class SpecError(HolderCVError, ValueError):
    pass
