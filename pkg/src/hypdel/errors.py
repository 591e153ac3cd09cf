"""Exception hierarchy shared by the library and the CLI."""


class HypDelError(Exception):
    """Base class for every error raised by hypdel."""


class ComplexError(HypDelError):
    """The gluing table does not describe a closed oriented surface."""


class UnpairedSide(ComplexError):
    pass


class SideReusedInTwoPairs(ComplexError):
    pass


class NonOrientable(ComplexError):
    pass


class BoundaryDetected(ComplexError):
    pass


class DisconnectedComplex(ComplexError):
    pass


class DimensionMismatch(HypDelError, ValueError):
    pass


class NotDelaunay(HypDelError):
    """Some edge target psi lies outside the open interval (0, pi)."""


class TooLarge(HypDelError):
    pass


class NotRealizable(HypDelError, ValueError):
    """Angle data that cannot be the angles of a hyperbolic triangle."""


class OutsideDomain(HypDelError):
    """An angle system outside the open set of realizable corner data."""


class Infeasible(HypDelError):
    def __init__(self, message, lp_result=None):
        super().__init__(message)
        self.lp_result = lp_result


class MaxIterExceeded(HypDelError):
    def __init__(self, message, residual=None, min_margin=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.min_margin = min_margin
        self.iterations = iterations


class NumericalBreakdown(HypDelError):
    pass


class SimplexCycleGuardTripped(HypDelError):
    pass


class NotCertified(HypDelError):
    pass


class DegenerateCircle(HypDelError):
    pass
