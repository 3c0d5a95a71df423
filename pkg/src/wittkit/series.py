"""Truncated power series over W_N(k) in ``n`` variables.

A series carries its own truncation pair: p-adic precision from its
coefficient ring and a total-degree bound ``D`` (terms of degree ``>= D`` are
unknown, not zero). Binary operations return the guaranteed truncation,
i.e. the smaller of the two bounds.
"""

from __future__ import annotations

import itertools

from wittkit.errors import NotAUnit, PrecisionMismatch
from wittkit.galois import GaloisRing


def monomials_below(nvars: int, D: int):
    """All exponent tuples of total degree < D, graded then lexicographic."""
    out = []
    for d in range(D):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    # combinations_with_replacement yields descending lex inside a degree
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


class TruncatedPowerSeries:
    __slots__ = ("ring", "nvars", "D", "coeffs")

    def __init__(self, ring: GaloisRing, nvars: int, D: int, coeffs=None):
        if D < 1:
            raise ValueError("degree bound must be positive")
        self.ring = ring
        self.nvars = nvars
        self.D = D
        clean = {}
        for mono, c in (coeffs or {}).items():
            mono = tuple(mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has wrong arity")
            if sum(mono) >= D:
                continue
            if isinstance(c, int):
                c = ring.from_int(c)
            c = tuple(x % ring.modulus for x in c)
            if any(c):
                clean[mono] = c
        self.coeffs = clean

    # construction helpers

    @classmethod
    def zero(cls, ring, nvars, D):
        return cls(ring, nvars, D)

    @classmethod
    def one(cls, ring, nvars, D):
        return cls(ring, nvars, D, {(0,) * nvars: ring.one})

    @classmethod
    def constant(cls, ring, nvars, D, c):
        return cls(ring, nvars, D, {(0,) * nvars: c})

    @classmethod
    def variable(cls, ring, nvars, D, i):
        e = [0] * nvars
        e[i] = 1
        return cls(ring, nvars, D, {tuple(e): ring.one})

    @classmethod
    def univariate(cls, ring, D, coeffs):
        """From a coefficient list ``[c_0, c_1, ...]`` (ints or ring elements)."""
        return cls(ring, 1, D, {(j,): c for j, c in enumerate(coeffs)})

    @classmethod
    def random(cls, ring, nvars, D, rng, density: float = 1.0, unit_constant: bool = False):
        coeffs = {}
        for mono in monomials_below(nvars, D):
            if rng.random() < density:
                coeffs[mono] = ring.random(rng)
        series = cls(ring, nvars, D, coeffs)
        if unit_constant:
            c0 = series.constant_term()
            if not ring.is_unit(c0):
                c0 = ring.add(c0, ring.one)
            series = series.with_coefficient((0,) * nvars, c0)
        return series

    # structure

    def _check(self, other):
        if not isinstance(other, TruncatedPowerSeries):
            raise TypeError(f"expected TruncatedPowerSeries, got {type(other).__name__}")
        if other.ring != self.ring or other.nvars != self.nvars:
            raise PrecisionMismatch(f"{self.ring}/{self.nvars} vs {other.ring}/{other.nvars}")

    def _like(self, coeffs, D=None):
        return TruncatedPowerSeries(self.ring, self.nvars, self.D if D is None else D, coeffs)

    def coefficient(self, mono):
        return self.coeffs.get(tuple(mono), self.ring.zero)

    def with_coefficient(self, mono, c):
        coeffs = dict(self.coeffs)
        coeffs[tuple(mono)] = c
        return self._like(coeffs)

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> int | None:
        """Lowest total degree of a nonzero term."""
        return min((sum(m) for m in self.coeffs), default=None)

    def degree(self) -> int | None:
        return max((sum(m) for m in self.coeffs), default=None)

    def truncate(self, D: int) -> TruncatedPowerSeries:
        if D > self.D:
            raise PrecisionMismatch(f"cannot extend degree bound {self.D} -> {D}")
        return self._like(self.coeffs, D)

    def lower_precision(self, N: int) -> TruncatedPowerSeries:
        ring = self.ring.at_precision(N)
        return TruncatedPowerSeries(ring, self.nvars, self.D, {m: self.ring.lower(c, N) for m, c in self.coeffs.items()})

    # arithmetic

    def __add__(self, other):
        if isinstance(other, int):
            other = self.constant(self.ring, self.nvars, self.D, self.ring.from_int(other))
        self._check(other)
        R = self.ring
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = R.add(out[m], c) if m in out else c
        return self._like(out, min(self.D, other.D))

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return self._like({m: R.neg(c) for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            R = self.ring
            return self._like({m: R.scale(c, other) for m, c in self.coeffs.items()})
        self._check(other)
        R = self.ring
        D = min(self.D, other.D)
        out = {}
        for m1, c1 in self.coeffs.items():
            d1 = sum(m1)
            if d1 >= D:
                continue
            for m2, c2 in other.coeffs.items():
                if d1 + sum(m2) >= D:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = R.mul(c1, c2)
                out[m] = R.add(out[m], prod) if m in out else prod
        return self._like(out, D)

    __rmul__ = __mul__

    def scale(self, c):
        R = self.ring
        return self._like({m: R.mul(c, v) for m, v in self.coeffs.items()})

    def __pow__(self, e: int):
        result = self.one(self.ring, self.nvars, self.D)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedPowerSeries):
            return NotImplemented
        return (self.ring, self.nvars, self.D, self.coeffs) == (other.ring, other.nvars, other.D, other.coeffs)

    def __hash__(self):
        return hash((self.ring, self.nvars, self.D, tuple(sorted(self.coeffs.items()))))

    def agrees_with(self, other, D: int | None = None, N: int | None = None) -> bool:
        """Equality after truncating both sides to ``(N, D)``."""
        D = min(self.D, other.D) if D is None else D
        N = min(self.ring.N, other.ring.N) if N is None else N
        a = self.truncate(D).lower_precision(N)
        b = other.truncate(D).lower_precision(N)
        return a.coeffs == b.coeffs

    def __repr__(self):
        terms = ", ".join(f"{m}: {c}" for m, c in sorted(self.coeffs.items()))
        return f"Series[{self.ring}, n={self.nvars}, D={self.D}]{{{terms}}}"

    def frobenius_lift(self) -> TruncatedPowerSeries:
        """``phi``: Witt Frobenius on coefficients, ``u_i -> u_i^p``."""
        R = self.ring
        p = R.p
        return self._like({tuple(p * e for e in m): R.frobenius(c) for m, c in self.coeffs.items()})

    def substitute(self, values: list[TruncatedPowerSeries]) -> TruncatedPowerSeries:
        """Compose with ``u_i -> values[i]`` (each of positive order)."""
        target = values[0]
        acc = TruncatedPowerSeries.zero(target.ring, target.nvars, target.D)
        for m, c in self.coeffs.items():
            term = TruncatedPowerSeries.constant(target.ring, target.nvars, target.D, c)
            for v, e in zip(values, m):
                if e:
                    term = term * v**e
            acc = acc + term
        return acc

    def to_json(self):
        return [
            [[str(e) for e in m], [str(x) for x in c]]
            for m, c in sorted(self.coeffs.items())
        ]


def series_invert(f: TruncatedPowerSeries) -> TruncatedPowerSeries:
    """Inverse modulo ``(p^N, degree D)`` by Newton iteration in the degree."""
    R = f.ring
    c0 = f.constant_term()
    if not R.is_unit(c0):
        raise NotAUnit(f"constant term {c0} has positive valuation")
    g = TruncatedPowerSeries.constant(R, f.nvars, f.D, R.inverse(c0))
    two = TruncatedPowerSeries.constant(R, f.nvars, f.D, R.from_int(2))
    prec = 1
    while prec < f.D:
        prec = min(2 * prec, f.D)
        fp = f.truncate(prec)
        gp = g.truncate(prec) if g.D >= prec else TruncatedPowerSeries(R, f.nvars, prec, g.coeffs)
        g = gp * (two.truncate(prec) - fp * gp)
    return TruncatedPowerSeries(R, f.nvars, f.D, g.coeffs)
