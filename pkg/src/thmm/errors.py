"""Exception types shared across the package."""


class ThmmError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMomentSequence(ThmmError, ValueError):
    """Moment data violates a structural requirement (shape, Hermiticity, interval)."""


class InsufficientMoments(ThmmError):
    """A requested quantity needs moments beyond those supplied."""


class OrderUnavailable(ThmmError):
    def __init__(self, family, index):
        super().__init__(
            f"polynomial {family}[{index}] needs moments beyond those supplied"
        )
        self.family = family
        self.index = index


class SingularPivot(ThmmError):
    """A matrix required to be positive definite failed its factorization."""

    def __init__(self, family, index):
        super().__init__(
            f"{family}[{index}] is not positive definite (pivot at or below threshold)"
        )
        self.family = family
        self.index = index


class SingularNormalization(ThmmError):
    """A polynomial value used as a normalizer is numerically singular."""


class RouteMismatch(ThmmError):
    """Two independent computation routes for the same quantity disagree."""

    def __init__(self, what, where, residual):
        super().__init__(
            f"route disagreement for {what} at {where}: relative residual {residual:.3e}"
        )
        self.what = what
        self.where = where
        self.residual = residual


class PoleAtZ(ThmmError):
    """The chosen factorized route has a scalar pole at the requested z."""


class SingularDenominator(ThmmError):
    def __init__(self, cond):
        super().__init__(
            f"linear-fractional denominator is numerically singular (cond ~ {cond:.3e})"
        )
        self.cond = cond


class PointOnInterval(ThmmError):
    """Extremal solutions are only defined off the moment interval [a, b]."""


class SingularLevel(ThmmError):
    def __init__(self, depth):
        super().__init__(f"continued-fraction level {depth} is not invertible")
        self.depth = depth


class NonPositiveParameter(ThmmError):
    def __init__(self, name, index):
        super().__init__(f"parameter {name}[{index}] must be Hermitian positive definite")
        self.name = name
        self.index = index


class InconsistentLengths(ThmmError):
    """Parameter chains have lengths that cannot drive the moment recursion."""


class EmptyMeasure(ThmmError):
    """A discrete measure needs at least one atom."""


class PointOutsideInterval(ThmmError):
    """A measure atom lies outside [a, b]."""


class WrongMatrixSize(ThmmError):
    """Operation restricted to scalar (q = 1) sequences."""
