"""Exception types raised by quatspec."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NotNormalError(DomainError):
    """The operator fails the normality test.

    Attributes
    ----------
    residual : float
        Frobenius norm of ``T*T - TT*``.
    """

    def __init__(self, residual, message=None):
        self.residual = float(residual)
        if message is None:
            message = f"operator is not normal: ||T*T - TT*||_F = {self.residual:.3e}"
        super().__init__(message)


class StructureError(ValueError):
    """A complex matrix does not descend to a quaternionic operator."""


class ConvergenceError(RuntimeError):
    """An iterative routine stopped before meeting its tolerance."""


class RankError(RuntimeError):
    """Numerical rank of a projection could not be decided."""


class ConsistencyError(RuntimeError):
    """Internal invariant of a decomposition was violated."""
