"""Perfect F_p-algebras: finite fields, monomial algebras and their quotients.

Every algebra here is a small immutable descriptor; its elements are plain
immutable Python values (tuples of ints) and all arithmetic goes through the
descriptor, e.g. ``k.mul(a, b)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
from sympy import isprime

from wittkit.errors import DenominatorOverflow, NotAUnit, ResourceLimit, UnsupportedPresentation

# Above this length the numpy convolution beats the pure-python double loop.
_CONVOLVE_CUTOFF = 24


def _strip(coeffs) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(int(c) for c in coeffs[:n])


def _poly_mul(a, b, p, limit=None):
    """Product of dense coefficient tuples over F_p, truncated below ``limit``."""
    if not a or not b:
        return ()
    if len(a) + len(b) > _CONVOLVE_CUTOFF:
        if limit is not None:
            a, b = a[:limit], b[:limit]
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p
        if limit is not None:
            out = out[:limit]
        return _strip(out.tolist())
    n = len(a) + len(b) - 1
    if limit is not None:
        n = min(n, limit)
    out = [0] * n
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            out[i + j] += x * y
    return _strip([c % p for c in out])


def _poly_divmod(a, m, p):
    """Division of dense F_p polynomials by ``m`` (any nonzero leading coefficient)."""
    a = list(a)
    m = _strip(m)
    inv_lead = pow(m[-1], -1, p)
    q = [0] * max(len(a) - len(m) + 1, 0)
    for i in range(len(a) - len(m), -1, -1):
        c = a[i + len(m) - 1] % p
        if c:
            c = c * inv_lead % p
            q[i] = c
            for j, mj in enumerate(m):
                a[i + j] = (a[i + j] - c * mj) % p
    return _strip(q), _strip([x % p for x in a[: len(m) - 1]])


class PerfectAlgebra:
    """Common interface for the F_p-algebras used as Witt vector bases.

    Subclasses provide ``zero``, ``one``, ``add``, ``neg``, ``mul``,
    ``frobenius`` and ``frobenius_inverse`` on their element values.
    ``is_perfect`` is False for truncated presentations, where Frobenius is
    surjective but not injective.
    """

    p: int
    is_perfect = True
    is_finite = False

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def frobenius_power(self, a, n: int):
        """``phi^n(a)`` for any integer n (negative means iterated roots)."""
        f = self.frobenius if n >= 0 else self.frobenius_inverse
        for _ in range(abs(n)):
            a = f(a)
        return a

    def elements(self):
        raise ResourceLimit(f"{self} is not enumerable")

    def constant_term(self, a) -> int:
        """Image under the augmentation to F_p, when the algebra has one."""
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteFieldAlg(PerfectAlgebra):
    """F_p[x]/(modulus) for a caller-chosen irreducible monic modulus.

    ``modulus`` lists coefficients from the constant term upwards and must
    end in 1. Elements are tuples of ``degree`` residues mod p.
    """

    p: int
    modulus: tuple

    is_finite = True

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) < 2 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if not _is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")

    @cached_property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @cached_property
    def order(self) -> int:
        return self.p**self.degree

    @cached_property
    def zero(self):
        return (0,) * self.degree

    @cached_property
    def one(self):
        return (1,) + (0,) * (self.degree - 1)

    @cached_property
    def gen(self):
        """The class of x."""
        if self.degree == 1:
            return (-self.modulus[0] % self.p,)
        return (0, 1) + (0,) * (self.degree - 2)

    def __repr__(self):
        return f"F_{self.p}^{self.degree}[mod {self.modulus}]"

    def _pad(self, t):
        return tuple(t) + (0,) * (self.degree - len(t))

    def element(self, coeffs) -> tuple:
        """Normal form of an arbitrary coefficient list (reduced mod modulus)."""
        _, r = _poly_divmod([int(c) % self.p for c in coeffs], self.modulus, self.p)
        return self._pad(r)

    def from_int(self, n: int):
        return self._pad((n % self.p,))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul(self, a, b):
        if self.degree == 1:
            return (a[0] * b[0] % self.p,)
        prod = _poly_mul(_strip(a), _strip(b), self.p)
        if not prod:
            return self.zero
        _, r = _poly_divmod(prod, self.modulus, self.p)
        return self._pad(r)

    def frobenius(self, a):
        if self.degree == 1:
            return a
        return self.pow(a, self.p)

    def frobenius_inverse(self, a):
        if self.degree == 1:
            return a
        return self.pow(a, self.p ** (self.degree - 1))

    def is_unit(self, a) -> bool:
        return any(a)

    def inverse(self, a):
        if not any(a):
            raise NotAUnit("zero is not invertible")
        return self.pow(a, self.order - 2)

    def elements(self):
        return itertools.product(range(self.p), repeat=self.degree)

    def constant_term(self, a) -> int:
        if self.degree != 1:
            raise NotImplementedError("only the prime field augments to F_p")
        return a[0]

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def generators(self):
        return [self.gen]

    def relations(self):
        """Polynomials over F_p, as coefficient tuples, vanishing on ``gen``."""
        return [self.modulus]

    def evaluate_poly(self, coeffs, x, ring=None):
        """Evaluate an integer polynomial at ``x`` in ``ring`` (default: self)."""
        ring = ring or self
        acc = ring.zero
        for c in reversed(coeffs):
            acc = ring.add(ring.mul(acc, x), ring.from_int(c))
        return acc


def PrimeField(p: int) -> FiniteFieldAlg:
    return FiniteFieldAlg(p, (0, 1))


def _is_irreducible(mod, p) -> bool:
    f = len(mod) - 1
    if f == 1:
        return True
    if f > 6:
        from sympy import Poly, symbols

        x = symbols("x")
        return Poly(list(reversed(mod)), x, modulus=p).is_irreducible
    for d in range(1, f // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            cand = tail + (1,)
            _, r = _poly_divmod(mod, cand, p)
            if not r:
                return False
    return True


@dataclass(frozen=True)
class PerfectMonomialAlg(PerfectAlgebra):
    """Finite exhaustion level of F_p[t^{1/p^inf}].

    Elements are dense coefficient tuples in ``s = t^{1/p^M}``: position ``k``
    holds the coefficient of ``t^(k/p^M)``. With ``bound`` set, monomials of
    exponent ``>= bound`` are zero (a semiperfect, non-perfect quotient).
    """

    p: int
    M: int
    bound: Fraction | None = None

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.M < 0:
            raise ValueError("M must be nonnegative")
        if self.bound is not None:
            b = Fraction(self.bound)
            object.__setattr__(self, "bound", b)
            if b <= 0 or (b * self.p**self.M).denominator != 1:
                raise ValueError(f"bound {b} is not a positive multiple of 1/p^{self.M}")

    @property
    def is_perfect(self):
        return self.bound is None

    @property
    def is_finite(self):
        return self.bound is not None

    @cached_property
    def scale(self) -> int:
        return self.p**self.M

    @cached_property
    def limit(self) -> int | None:
        """Number of retained monomials, or None when untruncated."""
        if self.bound is None:
            return None
        return int(self.bound * self.scale)

    zero = ()

    @cached_property
    def one(self):
        return (1,)

    def __repr__(self):
        tr = f"/(t^{self.bound})" if self.bound is not None else ""
        return f"F_{self.p}[t^(1/{self.p}^{self.M})]{tr}"

    def _trunc(self, coeffs):
        if self.limit is not None:
            coeffs = coeffs[: self.limit]
        return _strip(coeffs)

    def from_int(self, n: int):
        return self._trunc((n % self.p,))

    def monomial(self, exponent, coeff: int = 1):
        e = Fraction(exponent) * self.scale
        if e.denominator != 1:
            raise DenominatorOverflow(f"t^{exponent} needs a denominator beyond p^{self.M}")
        k = int(e)
        return self._trunc((0,) * k + (coeff % self.p,))

    def from_monomials(self, terms):
        acc = self.zero
        for e, c in terms:
            acc = self.add(acc, self.monomial(e, c))
        return acc

    def monomials(self, a):
        """``[(exponent, coeff), ...]`` for the nonzero terms of ``a``."""
        return [(Fraction(k, self.scale), c) for k, c in enumerate(a) if c]

    def add(self, a, b):
        p = self.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return _strip(out)

    def neg(self, a):
        p = self.p
        return tuple(-c % p for c in a)

    def mul(self, a, b):
        return _poly_mul(a, b, self.p, self.limit)

    def frobenius(self, a):
        p = self.p
        out = [0] * ((len(a) - 1) * p + 1) if a else []
        for k, c in enumerate(a):
            if c:
                out[k * p] = c
        return self._trunc(out)

    def frobenius_inverse(self, a):
        """Unique p-th root when untruncated; the canonical one otherwise."""
        p = self.p
        if not a:
            return a
        out = [0] * ((len(a) - 1) // p + 1)
        for k, c in enumerate(a):
            if c:
                if k % p:
                    raise DenominatorOverflow(
                        f"p-th root of t^({k}/{self.scale}) needs denominator p^{self.M + 1}"
                    )
                out[k // p] = c
        return _strip(out)

    def constant_term(self, a) -> int:
        return a[0] if a else 0

    def is_unit(self, a) -> bool:
        if not a or not a[0]:
            return False
        return self.bound is not None or len(a) == 1

    def inverse(self, a):
        if not self.is_unit(a):
            raise NotAUnit(f"{self.monomials(a)} is not a unit in {self}")
        if self.bound is None:
            return (pow(a[0], -1, self.p),)
        # Truncated: geometric series in the nilpotent part.
        p, n = self.p, self.limit
        inv0 = pow(a[0], -1, p)
        out = [0] * n
        out[0] = inv0
        for k in range(1, n):
            s = sum(a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1))
            out[k] = -s * inv0 % p
        return _strip(out)

    def min_exponent(self, a) -> Fraction | None:
        for k, c in enumerate(a):
            if c:
                return Fraction(k, self.scale)
        return None

    def divide(self, a, b):
        """Exact quotient ``a / b`` in the untruncated polynomial ring, or None."""
        if not b:
            raise ZeroDivisionError("division by zero")
        if not a:
            return self.zero
        q, r = _poly_divmod(a, b, self.p)
        return None if r else q

    def elements(self):
        if self.limit is None:
            raise ResourceLimit(f"{self} is infinite")
        if self.limit > 12:
            raise ResourceLimit(f"{self} has {self.p}^{self.limit} elements")
        return (_strip(c) for c in itertools.product(range(self.p), repeat=self.limit))

    def random(self, rng, terms: int = 3, max_exponent: Fraction | None = None):
        top = self.limit
        if max_exponent is not None:
            top = int(Fraction(max_exponent) * self.scale)
        if top is None:
            top = 4 * self.scale
        acc = self.zero
        for _ in range(terms):
            k = rng.randrange(top)
            acc = self.add(acc, self._trunc((0,) * k + (rng.randrange(self.p),)))
        return acc

    def truncated(self, bound) -> PerfectMonomialAlg:
        return PerfectMonomialAlg(self.p, self.M, Fraction(bound))

    def reduce(self, a, target: PerfectMonomialAlg):
        """Image of ``a`` in another level/truncation of the same tower."""
        if target.p != self.p:
            raise ValueError("different characteristic")
        out = self.zero
        for e, c in self.monomials(a):
            out = target.add(out, target.monomial(e, c))
        return out


@dataclass(frozen=True)
class SemiperfectQuotient:
    """A monomial quotient ``alg / (t^{b_1}, ..., t^{b_r})``.

    Frobenius is surjective at presentation level: the tower declares the
    root ``t^{e/p}`` of every generator ``t^e`` (one level up when ``e``
    already uses the full denominator ``p^M``).
    """

    algebra: PerfectMonomialAlg
    relations: tuple = field(default=())

    def __post_init__(self):
        rels = tuple(self.relations)
        object.__setattr__(self, "relations", rels)
        for r in rels:
            terms = self.algebra.monomials(r)
            if len(terms) != 1:
                raise UnsupportedPresentation(f"relation {terms} is not a monomial")
            if terms[0][0] == 0:
                raise UnsupportedPresentation("a unit relation presents the zero ring")

    @property
    def p(self):
        return self.algebra.p

    @cached_property
    def relation_exponents(self) -> list[Fraction]:
        return [self.algebra.monomials(r)[0][0] for r in self.relations]

    @cached_property
    def quotient(self) -> PerfectMonomialAlg:
        """The quotient ring itself as a truncated monomial algebra."""
        bounds = list(self.relation_exponents)
        if self.algebra.bound is not None:
            bounds.append(self.algebra.bound)
        if not bounds:
            return self.algebra
        return PerfectMonomialAlg(self.p, self.algebra.M, min(bounds))

    def is_semiperfect(self) -> bool:
        # Every generator t^(k/p^M) has the declared root t^(k/p^(M+1)).
        return True

    def is_nilpotent_monomial(self, exponent: Fraction, max_steps: int | None = None):
        """Smallest m with ``p^m * exponent`` in the relation ideal, or None."""
        bounds = self.relation_exponents
        if not bounds:
            return None
        if exponent == 0:
            return None
        b = min(bounds)
        m = 0
        e = Fraction(exponent)
        while e < b:
            e *= self.p
            m += 1
            if max_steps is not None and m > max_steps:
                return None
        return m


def direct_limit_perfection(A) -> PerfectAlgebra:
    """Colimit of ``A -> A -> ...`` along Frobenius.

    For a semiperfect monomial quotient this is ``A / sqrt(0)``: a monomial
    survives iff none of its p-power iterates reaches the relation ideal.
    Already-perfect algebras are returned unchanged.
    """
    if isinstance(A, PerfectAlgebra) and A.is_perfect:
        return A
    if isinstance(A, PerfectMonomialAlg):
        full = PerfectMonomialAlg(A.p, A.M)
        A = SemiperfectQuotient(full, (full.monomial(A.bound),))
    if not isinstance(A, SemiperfectQuotient):
        raise UnsupportedPresentation(f"no perfection algorithm for {A!r}")
    if not A.relations and A.algebra.bound is None:
        return A.algebra
    # Every positive exponent is nilpotent; only the constants survive.
    return PrimeField(A.p)


def perfection_map(A, x):
    """Image of ``x`` under the canonical map ``A -> direct_limit_perfection(A)``."""
    target = direct_limit_perfection(A)
    if target is A:
        return x
    if isinstance(A, SemiperfectQuotient):
        alg = A.algebra
    else:
        alg = A
    return target.from_int(alg.constant_term(x))


def special_fiber(R):
    """``(kappa, q)`` with ``kappa = (R/p)_perf`` and ``q`` the map from the tilt carrier.

    ``R`` is any object exposing ``residue_presentation()`` (R/p as a
    perfect algebra or a semiperfect quotient) and ``tilt_constant_term(x)``.
    """
    pres = R.residue_presentation()
    kappa = direct_limit_perfection(pres)
    if kappa is pres:
        return kappa, lambda x: x
    return kappa, (lambda x: kappa.from_int(R.tilt_constant_term(x)))
