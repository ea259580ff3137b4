"""Exception hierarchy shared by every module of the package."""


class AluthgeError(Exception):
    """Base class for all errors raised by :mod:`spherical_aluthge`."""


class NonFinite(AluthgeError, ValueError):
    """A matrix contains NaN or infinite entries."""


class ShapeMismatch(AluthgeError, ValueError):
    """Operands have incompatible shapes."""


class NonSquare(ShapeMismatch):
    """A square matrix was required."""


class NonHermitian(AluthgeError, ValueError):
    def __init__(self, residual, tol):
        super().__init__(f"matrix is not Hermitian: residual {residual:.3e} > {tol:.3e}")
        self.residual = residual
        self.tol = tol


class NegativeEigenvalue(AluthgeError, ValueError):
    def __init__(self, value, threshold):
        super().__init__(
            f"eigenvalue {value:.3e} is below the clamp threshold {-threshold:.3e}"
        )
        self.value = value
        self.threshold = threshold


class ConvergenceFailure(AluthgeError, ArithmeticError):
    """An iterative LAPACK routine did not converge."""


class NotCommuting(AluthgeError, ValueError):
    def __init__(self, residual, pair, tol):
        super().__init__(
            f"matrices {pair[0]} and {pair[1]} do not commute: "
            f"relative residual {residual:.3e} > {tol:.3e}"
        )
        self.residual = residual
        self.pair = pair
        self.tol = tol


class NumericalFailure(AluthgeError, ArithmeticError):
    """A computed quantity violates its defining identity beyond tolerance.

    ``trace`` carries the partial :class:`~spherical_aluthge.polar.IterateTrace`
    when the failure happens in the middle of an iteration.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class SizeGuard(AluthgeError, ValueError):
    """A requested computation exceeds a configured size limit."""


class GenericityFailure(AluthgeError, ArithmeticError):
    """Random linear combinations failed to separate the joint eigenvalues."""


class NegativeHomology(AluthgeError, ArithmeticError):
    """Rank tolerances produced an inconsistent (negative) homology dimension."""
