"""Exception types shared across the package."""


class QCalculusError(Exception):
    """Base class for numerical failures in q-calculus evaluations."""


class NonConvergenceError(QCalculusError):
    """A truncated series/product hit its term cap before meeting tolerance."""


class PoleError(QCalculusError):
    """Evaluation requested at a pole (q-gamma at a nonpositive integer)."""


class SingularKernelError(QCalculusError):
    """A shifted-factorial product factor has a vanishing denominator."""


class MonotonicityError(QCalculusError):
    """Computed difference weights violate the strict monotone chain."""


class FixedPointError(QCalculusError):
    """The implicit step's fixed-point iteration did not converge.

    Carries the failing step index and the partial trace so callers can
    still report the nodes that did converge.
    """

    def __init__(self, message, step, trace):
        super().__init__(message)
        self.step = step
        self.trace = trace
