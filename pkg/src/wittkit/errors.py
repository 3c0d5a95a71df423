"""Exception hierarchy shared by all modules."""


class WittkitError(Exception):
    """Base class for every error raised by this package."""


class NotAUnit(WittkitError, ArithmeticError):
    pass


class PrecisionMismatch(WittkitError, ValueError):
    """Operands live at different primes or precisions."""


class DenominatorOverflow(WittkitError, ArithmeticError):
    """A p-th root would need a denominator beyond the algebra's bound."""


class UnsupportedPresentation(WittkitError, ValueError):
    pass


class InsufficientDepth(WittkitError, ValueError):
    pass


class NotUnitMultipleOfP(WittkitError, ArithmeticError):
    pass


class StabilizationFailure(WittkitError, RuntimeError):
    pass


class NotDistinguished(WittkitError, ValueError):
    pass


class NotDivisible(WittkitError, ArithmeticError):
    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class DegreeBoundTooSmall(WittkitError, ValueError):
    pass


class ConstantTermNotP(WittkitError, ValueError):
    pass


class Inconclusive(WittkitError):
    """The requested certificate cannot be produced at the current precision."""


class ResourceLimit(WittkitError, ValueError):
    pass


class InexactDivision(WittkitError, AssertionError):
    """An exact division left a remainder; always an internal bug."""
