"""Exception hierarchy shared by every module of the package."""


class TropicalError(ValueError):
    """Base class for domain errors raised by this package."""


class Divergent(TropicalError):
    """A Kleene star series is unbounded."""


class DivergentClosure(Divergent):
    """Matrix closure does not exist because of a divergent cycle."""


class NotConverged(TropicalError):
    """An iterative solver hit its iteration cap; ``last`` holds the final iterate."""

    def __init__(self, max_iters, last):
        super().__init__(f"no fixpoint after {max_iters} iterations")
        self.max_iters = max_iters
        self.last = last


class OrderUndefined(TropicalError):
    """The standard order is requested for a non-idempotent semiring."""


class ShapeMismatch(TropicalError):
    pass


class SpecMismatch(TropicalError):
    pass


class GridMismatch(TropicalError):
    pass


class StepMismatch(TropicalError):
    pass


class EmptyDomain(TropicalError):
    """A grid function has no value other than the semiring zero."""


class NonpositiveArgument(TropicalError):
    pass


class ZeroValue(TropicalError):
    """The polynomial vanishes (numerically) at the requested sample point."""


class NotInGeneralPosition(TropicalError):
    pass


class DimensionUnsupported(TropicalError):
    pass


class DimMismatch(TropicalError):
    pass


class LawViolation(TropicalError):
    def __init__(self, law, witnesses=()):
        super().__init__(f"law violated: {law}")
        self.law = law
        self.witnesses = tuple(witnesses)


class LinearityViolation(TropicalError):
    def __init__(self, index, lhs, rhs):
        super().__init__(f"min-plus linearity fails at gridpoint {index}: {lhs!r} != {rhs!r}")
        self.index = index
        self.lhs = lhs
        self.rhs = rhs


class StabilityViolation(TropicalError):
    pass


class NonpositiveU(TropicalError):
    pass


class DegenerateScales(TropicalError):
    pass


class NonmonotoneMeasure(TropicalError):
    pass


class NoRoots(TropicalError):
    pass


class DegenerateCurve(TropicalError):
    pass


class EmptyWindow(TropicalError):
    pass
