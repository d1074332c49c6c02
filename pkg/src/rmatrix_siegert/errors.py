"""Exception hierarchy.

Everything raised on purpose by the package derives from ``RMatrixSiegertError``.
``NumericalError`` marks failures of the numerics themselves (poles hit,
singular updates, non-convergence), as opposed to bad arguments.
"""


class RMatrixSiegertError(Exception):
    pass


class InvalidArgumentError(RMatrixSiegertError, ValueError):
    pass


class OutOfDomainError(InvalidArgumentError):
    pass


class NumericalError(RMatrixSiegertError, ArithmeticError):
    pass


class SingularPotentialError(NumericalError):
    pass


class SingularUpdateError(NumericalError):
    pass


class RMatrixPoleError(NumericalError):
    """Raised when ``C(B) - E*N`` is singular to working precision."""

    def __init__(self, energy, rcond):
        self.energy = energy
        self.rcond = rcond
        super().__init__(f"R-matrix pole at E={energy!r} (rcond={rcond:.3e})")


class PoleEvaluationError(NumericalError):
    pass


class LogDerivativePoleError(NumericalError):
    pass


class EigenSolverError(NumericalError):
    def __init__(self, dimension, message="eigenvalue solver did not converge"):
        self.dimension = dimension
        super().__init__(f"{message} (subspace dimension {dimension})")


class AccuracyWarningError(NumericalError):
    """Pole sum evaluated over a set containing unnormalizable states.

    ``partial`` holds the value obtained from the remaining states.
    """

    def __init__(self, partial, excluded):
        self.partial = partial
        self.excluded = tuple(excluded)
        super().__init__(
            f"{len(self.excluded)} Siegert state(s) could not be normalized; "
            f"pole sum is unreliable (partial value {partial!r})"
        )


class ConvergenceError(NumericalError):
    pass
