"""Arithmetic in Z/p^N with explicit precision.

Values are immutable. Two :class:`PAdicInt` values may only be combined when
they share a context; lowering precision is always explicit via
:meth:`PAdicInt.lower_precision`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import isprime

from wittkit.errors import NotAUnit, PrecisionMismatch


@dataclass(frozen=True)
class AtLeast:
    """A lower bound standing in for a valuation that precision hides."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


@dataclass(frozen=True)
class PAdicContext:
    p: int
    N: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"precision must be a positive integer, got {self.N!r}")

    @cached_property
    def modulus(self) -> int:
        return self.p**self.N

    def __call__(self, value: int) -> PAdicInt:
        return PAdicInt(self, value % self.modulus)

    def zero(self) -> PAdicInt:
        return PAdicInt(self, 0)

    def one(self) -> PAdicInt:
        return PAdicInt(self, 1 % self.modulus)

    def elements(self):
        return (PAdicInt(self, r) for r in range(self.modulus))


@dataclass(frozen=True)
class PAdicInt:
    ctx: PAdicContext
    residue: int

    def __post_init__(self):
        if not 0 <= self.residue < self.ctx.modulus:
            raise ValueError(f"residue {self.residue} out of range for p^N = {self.ctx.modulus}")

    def _coerce(self, other) -> int:
        if isinstance(other, PAdicInt):
            if other.ctx != self.ctx:
                raise PrecisionMismatch(f"contexts differ: {self.ctx} vs {other.ctx}")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx(self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx(self.residue - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx(o - self.residue)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx(self.residue * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self.ctx(-self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return padic_invert(self) ** (-e)
        return PAdicInt(self.ctx, pow(self.residue, e, self.ctx.modulus))

    def __eq__(self, other):
        if isinstance(other, PAdicInt):
            return self.ctx == other.ctx and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.ctx.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.residue))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.ctx.p}^{self.ctx.N})"

    def is_unit(self) -> bool:
        return self.residue % self.ctx.p != 0

    def valuation(self):
        return padic_valuation(self)

    def inverse(self) -> PAdicInt:
        return padic_invert(self)

    def lower_precision(self, N: int) -> PAdicInt:
        if N > self.ctx.N:
            raise PrecisionMismatch(f"cannot raise precision from {self.ctx.N} to {N}")
        return PAdicContext(self.ctx.p, N)(self.residue)


def padic_invert(a: PAdicInt) -> PAdicInt:
    if a.residue % a.ctx.p == 0:
        raise NotAUnit(f"{a} has positive valuation")
    return PAdicInt(a.ctx, pow(a.residue, -1, a.ctx.modulus))


def padic_valuation(a: PAdicInt):
    """Exact valuation, or ``AtLeast(N)`` for a zero residue."""
    r = a.residue
    if r == 0:
        return AtLeast(a.ctx.N)
    v = 0
    while r % a.ctx.p == 0:
        r //= a.ctx.p
        v += 1
    return v


def teichmuller_lift_prime_field(x: int, ctx: PAdicContext) -> PAdicInt:
    """The unique lift of ``x mod p`` fixed by ``y -> y^p``.

    Iterating ``y -> y^p`` gains one p-adic digit per step, so the fixpoint
    is reached within ``N`` iterations.
    """
    m = ctx.modulus
    y = x % ctx.p
    for _ in range(ctx.N + 1):
        z = pow(y, ctx.p, m)
        if z == y:
            return PAdicInt(ctx, y)
        y = z
    raise AssertionError("Teichmuller iteration did not stabilise")  # pragma: no cover


def teichmuller_iterations(x: int, ctx: PAdicContext) -> int:
    """Number of Frobenius steps before the fixpoint iteration stabilises."""
    m = ctx.modulus
    y = x % ctx.p
    steps = 0
    while pow(y, ctx.p, m) != y:
        y = pow(y, ctx.p, m)
        steps += 1
    return steps
