"""Exact finite-precision arithmetic for Witt vectors, tilts and prisms."""

from wittkit.errors import (
    ConstantTermNotP,
    DegreeBoundTooSmall,
    DenominatorOverflow,
    Inconclusive,
    InexactDivision,
    InsufficientDepth,
    NotAUnit,
    NotDistinguished,
    NotDivisible,
    NotUnitMultipleOfP,
    PrecisionMismatch,
    ResourceLimit,
    StabilizationFailure,
    UnsupportedPresentation,
    WittkitError,
)
from wittkit.padic import AtLeast, PAdicContext, PAdicInt

__version__ = "0.1.0"

__all__ = [
    "AtLeast",
    "ConstantTermNotP",
    "DegreeBoundTooSmall",
    "DenominatorOverflow",
    "Inconclusive",
    "InexactDivision",
    "InsufficientDepth",
    "NotAUnit",
    "NotDistinguished",
    "NotDivisible",
    "NotUnitMultipleOfP",
    "PAdicContext",
    "PAdicInt",
    "PrecisionMismatch",
    "ResourceLimit",
    "StabilizationFailure",
    "UnsupportedPresentation",
    "WittkitError",
]
