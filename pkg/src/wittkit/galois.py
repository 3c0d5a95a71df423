"""W_N(F_q) realised as the Galois ring (Z/p^N)[x]/(f~).

``f~`` is the integer lift of the residue field modulus. Elements are tuples
of ``f`` residues mod p^N. The isomorphism with Witt digits sends
``(a_0, a_1, ...)`` to ``sum p^i omega(a_i^(1/p^i))`` where ``omega`` is the
Teichmuller lift; :meth:`GaloisRing.from_witt` and :meth:`GaloisRing.to_witt`
implement it in both directions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from wittkit.errors import NotAUnit, PrecisionMismatch
from wittkit.padic import AtLeast
from wittkit.perfect import FiniteFieldAlg, PrimeField


@dataclass(frozen=True)
class GaloisRing:
    k: FiniteFieldAlg
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("precision must be positive")

    @classmethod
    def prime(cls, p: int, N: int) -> GaloisRing:
        return cls(PrimeField(p), N)

    @property
    def p(self) -> int:
        return self.k.p

    @property
    def f(self) -> int:
        return self.k.degree

    @cached_property
    def modulus(self) -> int:
        return self.p**self.N

    @cached_property
    def zero(self):
        return (0,) * self.f

    @cached_property
    def one(self):
        return (1 % self.modulus,) + (0,) * (self.f - 1)

    def __repr__(self):
        return f"W_{self.N}({self.k!r})"

    def at_precision(self, N: int) -> GaloisRing:
        return GaloisRing(self.k, N)

    def lower(self, a, N: int):
        if N > self.N:
            raise PrecisionMismatch(f"cannot raise precision {self.N} -> {N}")
        m = self.p**N
        return tuple(c % m for c in a)

    def from_int(self, n: int):
        return (n % self.modulus,) + (0,) * (self.f - 1)

    def element(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > self.f:
            raise ValueError(f"expected at most {self.f} coordinates")
        m = self.modulus
        return tuple(c % m for c in coeffs) + (0,) * (self.f - len(coeffs))

    def add(self, a, b):
        m = self.modulus
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub(self, a, b):
        m = self.modulus
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg(self, a):
        m = self.modulus
        return tuple(-x % m for x in a)

    def scale(self, a, n: int):
        m = self.modulus
        return tuple(x * n % m for x in a)

    def mul(self, a, b):
        m = self.modulus
        if self.f == 1:
            return (a[0] * b[0] % m,)
        f = self.f
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        mod = self.k.modulus
        for i in range(2 * f - 2, f - 1, -1):
            c = prod[i]
            if c:
                for j in range(f):
                    prod[i - f + j] -= c * mod[j]
        return tuple(c % m for c in prod[:f])

    def pow(self, a, e: int):
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_zero(self, a) -> bool:
        return not any(a)

    def valuation(self, a):
        """p-adic valuation (min over coordinates), ``AtLeast(N)`` for zero."""
        if not any(a):
            return AtLeast(self.N)
        v = self.N
        p = self.p
        for c in a:
            if c:
                w = 0
                while c % p == 0:
                    c //= p
                    w += 1
                v = min(v, w)
        return v

    def is_unit(self, a) -> bool:
        return any(c % self.p for c in a)

    def residue(self, a):
        """Reduction to the residue field k."""
        return tuple(c % self.p for c in a)

    def lift(self, a):
        """Naive lift of a residue-field element (coordinates in [0, p))."""
        return tuple(int(c) for c in a)

    def inverse(self, a):
        if not self.is_unit(a):
            raise NotAUnit(f"{a} is not a unit in {self}")
        y = self.lift(self.k.inverse(self.residue(a)))
        two = self.from_int(2)
        prec = 1
        while prec < self.N:
            y = self.mul(y, self.sub(two, self.mul(a, y)))
            prec *= 2
        return y

    def divide_by_p(self, a, times: int = 1):
        """Exact ``a / p^times``, returned in the ring of precision N - times."""
        q = self.p**times
        if any(c % q for c in a):
            raise NotAUnit(f"{a} is not divisible by p^{times}")
        target = self.at_precision(self.N - times)
        return tuple((c // q) % target.modulus for c in a)

    def teichmuller(self, x):
        """Unique lift of ``x`` in k fixed by ``y -> y^q``."""
        y = self.lift(x)
        q = self.k.order
        for _ in range(self.N + 1):
            z = self.pow(y, q)
            if z == y:
                return y
            y = z
        raise AssertionError("Teichmuller iteration did not stabilise")  # pragma: no cover

    def teichmuller_expansion(self, a):
        """Residues ``b_i`` with ``a = sum p^i omega(b_i)``."""
        out = []
        cur = a
        ring = self
        for i in range(self.N):
            b = ring.residue(cur)
            out.append(b)
            if i == self.N - 1:
                break
            diff = ring.sub(cur, ring.teichmuller(b))
            cur = ring.divide_by_p(diff)
            ring = ring.at_precision(ring.N - 1)
        return out

    def frobenius(self, a):
        """Witt Frobenius: ``sum p^i omega(b_i) -> sum p^i omega(b_i^p)``."""
        if self.f == 1:
            return a
        acc = self.zero
        for i, b in enumerate(self.teichmuller_expansion(a)):
            acc = self.add(acc, self.scale(self.teichmuller(self.k.frobenius(b)), self.p**i))
        return acc

    def to_witt(self, a):
        from wittkit.witt import WittVector

        expansion = self.teichmuller_expansion(a)
        digits = [self.k.frobenius_power(b, i) for i, b in enumerate(expansion)]
        return WittVector(self.k, digits)

    def from_witt(self, x):
        if x.base != self.k or x.length != self.N:
            raise PrecisionMismatch(f"{x!r} does not live in {self}")
        acc = self.zero
        for i, d in enumerate(x.digits):
            b = self.k.frobenius_power(d, -i)
            acc = self.add(acc, self.scale(self.teichmuller(b), self.p**i))
        return acc

    def random(self, rng):
        return tuple(rng.randrange(self.modulus) for _ in range(self.f))

    def elements(self):
        return itertools.product(range(self.modulus), repeat=self.f)
