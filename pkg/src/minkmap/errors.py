"""Exception hierarchy shared by all minkmap modules."""


class MinkmapError(Exception):
    """Base class for all domain errors raised by this package."""


class SingularMatrix(MinkmapError):
    pass


class NotUnimodular(MinkmapError):
    pass


class PointAtInfinity(MinkmapError):
    pass


class InvalidDimension(MinkmapError):
    pass


class DegenerateSimplex(MinkmapError):
    pass


class InvalidProjectiveFrame(MinkmapError):
    pass


class OutsideDomain(MinkmapError):
    pass


class NumericFailure(MinkmapError):
    pass


class DepthExceeded(MinkmapError):
    pass


class DensitySingularity(MinkmapError):
    pass


class DivergentIntegral(MinkmapError):
    pass


class InfiniteInvariantMeasure(MinkmapError):
    pass


class QuadratureFailure(MinkmapError):
    pass


class LemmaViolation(MinkmapError):
    """An exact linear system that theory guarantees to be solvable was not."""


class StrategyViolation(MinkmapError):
    """The explicit pursuit strategy failed to decrease its potential."""


class InvalidInput(MinkmapError):
    pass
