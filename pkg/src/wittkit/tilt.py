"""Perfectoid approximation towers, the sharp map and Fontaine's theta.

Each family presents a finite level ``R_{M,N}`` of a perfectoid ring together
with ``R/p = F_p[g]/(g^n)``. Writing ``g = t^(1/p^M)`` identifies ``R/p`` with
the truncated monomial algebra ``F_p[t^(1/p^M)]/(t^c)``; then a tilt element
``t^e`` has components ``t^(e/p^i)`` and the tilt is modelled by monomials.

The tilt carrier is the level ``M_b = M - N + 1`` truncated at ``t^(c p^(N-1))``.
That is exactly the part of the tilt the first N components can see, so
``theta`` on ``W_N`` factors through it. Its image consists of the sums
``sum_i p^i z_i^(p^(N-1-i))`` with ``z_i`` lifts from R/p; it contains the
level-``M_b`` subring of ``R_{M,N}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np

from wittkit.delta import DeltaRingCarrier, is_distinguished
from wittkit.errors import (
    Inconclusive,
    InsufficientDepth,
    NotUnitMultipleOfP,
    UnsupportedPresentation,
)
from wittkit.linalg import smith_local
from wittkit.perfect import (
    FiniteFieldAlg,
    PerfectAlgebra,
    PerfectMonomialAlg,
    PrimeField,
    SemiperfectQuotient,
    special_fiber,
)
from wittkit.report import Report
from wittkit.witt import (
    WittVector,
    integer_witt,
    teichmuller,
    witt_divide_by_p,
    witt_zero,
)

# products of two reduced coefficients summed n times must fit in int64
_NUMPY_SAFE = 2**62


class PerfectoidApprox:
    """Common interface; subclasses provide the ring ``R_{M,N}`` and its tilt."""

    family: str
    p: int
    M: int
    N: int

    # ring R_{M,N}
    def zero(self): ...
    def one(self): ...
    def from_int(self, n: int): ...
    def add(self, a, b): ...
    def sub(self, a, b): ...
    def mul(self, a, b): ...
    def scale(self, a, n: int): ...
    def is_zero(self, a) -> bool: ...
    def random(self, rng): ...

    def pow(self, a, e: int):
        out, base = self.one(), a
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    # reduction mod p and lifting
    residue: PerfectAlgebra  # R/p
    carrier: PerfectAlgebra  # tilt carrier

    def mod_p(self, a): ...
    def lift(self, b, rng=None): ...
    def component(self, x, i: int): ...

    def tilt_element(self, x, depth: int | None = None) -> TiltElement:
        depth = self.N if depth is None else depth
        return TiltElement(self, tuple(self.component(x, i) for i in range(depth)))

    # family data
    def xi_over(self, alg: PerfectAlgebra) -> WittVector: ...

    def xi(self) -> WittVector:
        return self.xi_over(self.carrier)

    def pi(self): ...

    def residue_presentation(self): ...

    def tilt_constant_term(self, x) -> int:
        return self.carrier.constant_term(x)

    def descriptor(self) -> dict:
        return {"family": self.family, "p": self.p, "M": self.M, "N": self.N}


class _PolyTower(PerfectoidApprox):
    """``(Z/p^N)[x]/(f)`` with ``f`` monic and ``f = g^n mod p`` for ``g = x - shift``."""

    c: Fraction  # n = c p^M

    def __init__(self, p: int, M: int, N: int, modulus: dict[int, int], shift: int):
        if N < 1 or M < 0:
            raise ValueError("need M >= 0 and N >= 1")
        self.p, self.M, self.N = p, M, N
        self.mod = p**N
        self.n = max(modulus)
        # x^n = -sum_{j<n} m_j x^j
        self.tail = {j: -c % self.mod for j, c in modulus.items() if j < self.n and c % self.mod}
        self.shift = shift
        self.residue = PerfectMonomialAlg(p, M, self.c)
        self.M_b = M - N + 1
        if self.M_b < 0:
            raise InsufficientDepth(f"root depth M={M} cannot support N={N} digits (need M >= N - 1)")
        self.carrier = PerfectMonomialAlg(p, self.M_b, self.c * p ** (N - 1))

    def __repr__(self):
        return f"{type(self).__name__}(p={self.p}, M={self.M}, N={self.N})"

    def __eq__(self, other):
        return type(self) is type(other) and (self.p, self.M, self.N) == (other.p, other.M, other.N)

    def __hash__(self):
        return hash((type(self).__name__, self.p, self.M, self.N))

    # ring arithmetic on coefficient tuples of length n (basis 1, x, ..., x^(n-1))

    def zero(self):
        return (0,) * self.n

    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        return (k % self.mod,) + (0,) * (self.n - 1)

    def element(self, coeffs):
        coeffs = [int(c) % self.mod for c in coeffs]
        return self._reduce(coeffs)

    def gen(self):
        return self._reduce([0, 1])

    def add(self, a, b):
        m = self.mod
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub(self, a, b):
        m = self.mod
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.mod for x in a)

    def scale(self, a, k: int):
        m = self.mod
        return tuple(x * k % m for x in a)

    def is_zero(self, a) -> bool:
        return not any(a)

    def _reduce(self, coeffs):
        c = list(coeffs)
        n, m = self.n, self.mod
        for d in range(len(c) - 1, n - 1, -1):
            top = c[d] % m
            if top:
                base = d - n
                for j, t in self.tail.items():
                    c[base + j] += top * t
        c = [v % m for v in c[:n]]
        return tuple(c) + (0,) * (n - len(c))

    def mul(self, a, b):
        if self.mod * self.mod * self.n < _NUMPY_SAFE:
            prod = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % self.mod
            return self._reduce(prod.tolist())
        prod = [0] * (2 * self.n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def random(self, rng):
        return tuple(rng.randrange(self.mod) for _ in range(self.n))

    def divide_by_p(self, a):
        """``a / p`` with coefficients reduced mod p^(N-1), re-embedded at precision N."""
        if any(x % self.p for x in a):
            raise ArithmeticError("element is not divisible by p")
        return tuple(x // self.p for x in a)

    # x-basis <-> g-basis

    @cached_property
    def _g_powers(self):
        g = self._reduce([-self.shift % self.mod, 1])
        out = [self.one()]
        for _ in range(1, self.n):
            out.append(self.mul(out[-1], g))
        return out

    def mod_p(self, a):
        """Image in ``R/p`` written in powers of g, i.e. of ``t^(1/p^M)``."""
        p, s = self.p, self.shift
        coeffs = [x % p for x in a]
        if s:
            # x^i = (g + s)^i
            out = [0] * self.n
            for i, c in enumerate(coeffs):
                if c:
                    for j in range(i + 1):
                        out[j] += c * comb(i, j) * pow(s, i - j, p)
            coeffs = [v % p for v in out]
        return self.residue._trunc(tuple(coeffs))

    def lift(self, b, rng=None):
        """A lift of ``b`` in R/p to ``R_{M,N}``; random in the class when ``rng`` is given."""
        acc = self.zero()
        for k, c in enumerate(b):
            if c:
                acc = self.add(acc, self.scale(self._g_powers[k], c))
        if rng is not None:
            acc = self.add(acc, self.scale(self.random(rng), self.p))
        return acc

    def component(self, x, i: int):
        """Component i of a carrier element: the image of ``x^(1/p^i)`` in R/p."""
        if i > self.M - self.M_b:
            raise InsufficientDepth(f"component {i} needs roots beyond level {self.M}")
        step = self.p ** (self.M - self.M_b - i)
        n = self.residue.limit
        out = [0] * min(n, (len(x) - 1) * step + 1 if x else 0)
        for k, c in enumerate(x):
            if c and k * step < n:
                out[k * step] = c
        return self.residue._trunc(tuple(out))

    # family data

    def residue_presentation(self):
        full = PerfectMonomialAlg(self.p, self.M)
        return SemiperfectQuotient(full, (full.monomial(self.c),))

    def level_subring_random(self, rng):
        """Random element of ``(Z/p^N)[x^(p^(N-1))]``, which theta hits."""
        step = self.p ** (self.N - 1)
        gen = self.pow(self.gen(), step)
        acc, power = self.zero(), self.one()
        for _ in range(self.n // step):
            acc = self.add(acc, self.scale(power, rng.randrange(self.mod)))
            power = self.mul(power, gen)
        return acc


class SelfRamified(_PolyTower):
    """``Z_p[p^(1/p^M)] / p^N = (Z/p^N)[x]/(x^(p^M) - p)``; ``p^flat = t``."""

    family = "self-ramified"

    def __init__(self, p: int, M: int, N: int):
        self.c = Fraction(1)
        super().__init__(p, M, N, {p**M: 1, 0: -p}, shift=0)

    def root(self, j: int):
        """``p^(1/p^j)`` for ``j <= M``."""
        return self.pow(self.gen(), self.p ** (self.M - j))

    def p_flat(self):
        return self.carrier.monomial(1)

    def xi_over(self, alg):
        N = self.N
        return integer_witt(self.p, alg, N) - teichmuller(alg.monomial(1), alg, N)

    def pi(self):
        return self.root(1)


class Cyclotomic(_PolyTower):
    """``Z_p[zeta_{p^M}] / p^N = (Z/p^N)[x]/Phi_{p^M}(x)``; ``t = epsilon - 1``."""

    family = "cyclotomic"

    def __init__(self, p: int, M: int, N: int):
        if M < 1:
            raise ValueError("the cyclotomic tower needs M >= 1")
        self.c = Fraction(p - 1, p)
        step = p ** (M - 1)
        super().__init__(p, M, N, {i * step: 1 for i in range(p)}, shift=1)
        if self.M_b < 1:
            raise InsufficientDepth(f"epsilon^(1/p) needs M >= N (got M={M}, N={N})")

    def zeta(self, j: int):
        """``zeta_{p^j}`` for ``j <= M``."""
        return self.pow(self.gen(), self.p ** (self.M - j))

    def epsilon_root(self, alg, j: int = 1):
        """``epsilon^(1/p^j) = 1 + t^(1/p^j)`` in a monomial algebra."""
        return alg.add(alg.one, alg.monomial(Fraction(1, self.p**j)))

    def xi_over(self, alg):
        N = self.N
        e = teichmuller(self.epsilon_root(alg), alg, N)
        acc, power = witt_zero(alg, N), integer_witt(1, alg, N)
        for _ in range(self.p):
            acc = acc + power
            power = power * e
        return acc

    def pi(self):
        if self.M < 2:
            raise InsufficientDepth("pi = zeta_{p^2} - 1 needs M >= 2")
        return self.sub(self.zeta(2), self.one())


class ZpDegenerate(_PolyTower):
    """``Z_p`` itself: ``R_{0,N} = Z/p^N``, ``R/p = F_p``. Not perfectoid."""

    family = "zp"

    def __init__(self, p: int, N: int):
        self.c = Fraction(1)
        self.p, self.M, self.N = p, 0, N
        self.mod = p**N
        self.n = 1
        self.tail = {0: 0}
        self.shift = 0
        self.residue = PerfectMonomialAlg(p, 0, 1)
        self.M_b = 0
        self.carrier = PrimeField(p)

    def component(self, x, i: int):
        return self.residue._trunc(tuple(x))

    def tilt_constant_term(self, x) -> int:
        return x[0]

    def xi_over(self, alg):
        # theta: W(F_p) -> Z_p is injective, so its kernel is generated by 0
        return witt_zero(alg, self.N)

    def pi(self):
        # p in pi^p R forces v(pi) <= 1/p, i.e. pi is a unit
        return self.one()


class CharPPerfect(PerfectoidApprox):
    """A perfect F_p-algebra k: ``R = R/p = R^flat = k`` and sharp is the identity."""

    family = "char-p"

    def __init__(self, k: PerfectAlgebra, N: int):
        self.k = k
        self.p, self.M, self.N = k.p, 0, N
        self.residue = k
        self.carrier = k

    def __repr__(self):
        return f"CharPPerfect({self.k!r}, N={self.N})"

    def __eq__(self, other):
        return isinstance(other, CharPPerfect) and (self.k, self.N) == (other.k, other.N)

    def __hash__(self):
        return hash(("char-p", self.k, self.N))

    def zero(self):
        return self.k.zero

    def one(self):
        return self.k.one

    def from_int(self, n: int):
        return self.k.from_int(n)

    def element(self, coeffs):
        return self.k.element(coeffs)

    def add(self, a, b):
        return self.k.add(a, b)

    def sub(self, a, b):
        return self.k.sub(a, b)

    def neg(self, a):
        return self.k.neg(a)

    def mul(self, a, b):
        return self.k.mul(a, b)

    def scale(self, a, n: int):
        return self.k.mul(a, self.k.from_int(n))

    def is_zero(self, a) -> bool:
        return self.k.is_zero(a)

    def random(self, rng):
        return self.k.random(rng)

    def mod_p(self, a):
        return a

    def lift(self, b, rng=None):
        return b

    def component(self, x, i: int):
        return self.k.frobenius_power(x, -i)

    def xi_over(self, alg):
        return integer_witt(self.p, alg, self.N)

    def pi(self):
        return self.zero()

    def residue_presentation(self):
        return self.k

    def tilt_constant_term(self, x) -> int:
        return self.k.constant_term(x)

    def descriptor(self) -> dict:
        return {"family": self.family, "p": self.p, "N": self.N, "k": repr(self.k)}


@dataclass(frozen=True)
class TiltElement:
    """A compatible sequence ``(x_0, ..., x_{L-1})`` in R/p with ``x_{i+1}^p = x_i``."""

    ambient: PerfectoidApprox
    components: tuple

    def __post_init__(self):
        Rp = self.ambient.residue
        for i in range(len(self.components) - 1):
            if Rp.frobenius(self.components[i + 1]) != self.components[i]:
                raise ValueError(f"components {i} and {i + 1} are not Frobenius-compatible")

    @property
    def depth(self) -> int:
        return len(self.components)

    def __mul__(self, other: TiltElement) -> TiltElement:
        Rp = self.ambient.residue
        depth = min(self.depth, other.depth)
        return TiltElement(
            self.ambient,
            tuple(Rp.mul(a, b) for a, b in zip(self.components[:depth], other.components[:depth])),
        )


def sharp(a: TiltElement, rng: random.Random | None = None):
    """``a^sharp = y^(p^(N-1))`` for any lift y of ``x_{N-1}``; lift-independent mod p^N."""
    R = a.ambient
    if a.depth < R.N:
        raise InsufficientDepth(f"tilt depth {a.depth} < precision {R.N}")
    y = R.lift(a.components[R.N - 1], rng)
    return R.pow(y, R.p ** (R.N - 1))


def fontaine_theta(x: WittVector, R: PerfectoidApprox, rng: random.Random | None = None):
    """``sum_i p^i a_i^sharp`` where ``x = sum_i p^i [a_i]``, so ``a_i = x_i^(1/p^i)``.

    The i-th term only matters mod ``p^(N-i)``, so ``a_i^sharp`` may be
    computed as ``y^(p^(N-1-i))`` with y a lift of component ``N-1-i`` of
    ``a_i``, which is component ``N-1`` of ``x_i``.
    """
    N, p = R.N, R.p
    if x.length < N:
        raise InsufficientDepth(f"Witt length {x.length} < precision {N}")
    acc = R.zero()
    for i in range(N):
        d = x.digits[i]
        if R.carrier.is_zero(d):
            continue
        y = R.lift(R.component(d, N - 1), rng)
        acc = R.add(acc, R.scale(R.pow(y, p ** (N - 1 - i)), p**i))
    return acc


def theta_preimage(y, R: PerfectoidApprox) -> WittVector:
    """A Witt vector with ``theta = y``, fixing one digit per step.

    Digit i contributes ``p^i z^(p^(N-1-i))`` with z the component ``N-1``
    of ``x_i``, and that component map is a bijection from the carrier onto
    R/p. So step i needs the residue of the remaining error to be a
    ``p^(N-1-i)``-th power; elements outside the image of theta raise
    ValueError.
    """
    if isinstance(R, CharPPerfect):
        return WittVector(R.k, [y] + [R.k.zero] * (R.N - 1))
    N, p = R.N, R.p
    C = R.carrier
    digits = []
    cur = y
    for i in range(N):
        b = R.mod_p(cur)
        step = p ** (N - 1 - i)
        if any(c and k % step for k, c in enumerate(b)):
            raise ValueError(f"{y} is outside the image of theta (digit {i})")
        z = [0] * ((len(b) - 1) // step + 1) if b else []
        for k, c in enumerate(b):
            if c:
                z[k // step] = c
        z = C._trunc(tuple(z))
        digits.append(z)
        if i < N - 1:
            term = R.pow(R.lift(R.component(z, N - 1)), step)
            cur = R.divide_by_p(R.sub(cur, term))
    return WittVector(C, digits)


@dataclass(frozen=True)
class ThetaKernelWitness:
    xi: WittVector
    family: PerfectoidApprox
    theta_vanishes: bool
    distinguished: bool

    @property
    def certified(self) -> bool:
        return self.theta_vanishes and self.distinguished


def _delta_carrier(R: PerfectoidApprox):
    """Untruncated carrier deep enough to take the roots delta needs."""
    if isinstance(R, CharPPerfect):
        return R.k
    if isinstance(R, ZpDegenerate):
        return R.carrier
    return PerfectMonomialAlg(R.p, R.M_b + R.N)


def theta_kernel_witness(R: PerfectoidApprox) -> ThetaKernelWitness:
    xi = R.xi()
    vanishes = R.is_zero(fontaine_theta(xi, R))
    deep = _delta_carrier(R)
    dist = is_distinguished(DeltaRingCarrier.witt(deep, R.N), R.xi_over(deep)) if R.N >= 2 else False
    return ThetaKernelWitness(xi, R, vanishes, dist)


def _solve_in_ring(R: _PolyTower, a, target):
    """Some r with ``a r = target`` in ``R_{M,N}``, by Smith normal form; or None."""
    cols = []
    for j in range(R.n):
        e = [0] * R.n
        e[j] = 1
        cols.append(R.mul(a, tuple(e)))
    A = [[cols[j][i] for j in range(R.n)] for i in range(R.n)]
    sol = smith_local(A, R.p, R.N).solve(list(target))
    return None if sol is None else tuple(sol)


def perfectoid_report(R: PerfectoidApprox) -> Report:
    report = Report(f"perfectoid axioms for {R!r}", payload=R.descriptor())
    p = R.p

    # (a) p in pi^p R with pi topologically nilpotent
    pi = R.pi()
    if isinstance(R, CharPPerfect):
        report.add("p lies in pi^p R", "Pass", "paper", "p = 0 in characteristic p, any pi works; pi = 0 exhibited")
    else:
        nilpotent = R.residue.constant_term(R.mod_p(pi)) == 0
        r = _solve_in_ring(R, R.pow(pi, p), R.from_int(p))
        if not nilpotent:
            report.add(
                "p lies in pi^p R",
                "Fail",
                "paper",
                "only a unit pi satisfies p in pi^p R, and R is not pi-adically complete for a unit",
            )
        elif r is None:
            report.add("p lies in pi^p R", "Fail", "paper", "p is not a multiple of pi^p at this precision")
        else:
            report.add("p lies in pi^p R", "Pass", "paper", "verified by solving pi^p r = p", pi=[str(c) for c in pi], r=[str(c) for c in r])

    # (b) R/p semiperfect
    pres = R.residue_presentation()
    if isinstance(pres, FiniteFieldAlg):
        ok = len({pres.frobenius(a) for a in pres.elements()}) == pres.order
        report.add("R/p is semiperfect", "Pass" if ok else "Fail", "paper", "Frobenius is onto on the finite field")
    elif isinstance(pres, SemiperfectQuotient):
        report.add(
            "R/p is semiperfect",
            "Pass" if pres.is_semiperfect() else "Fail",
            "paper",
            f"R/p = {pres.quotient!r}; every t^e has the declared root t^(e/p)",
        )
    else:
        report.add("R/p is semiperfect", "Pass", "paper", f"{pres!r} is perfect")

    # (c) kernel of theta generated by a distinguished element
    if R.N < 2:
        report.add("ker theta is principal", "Inconclusive", "paper", "distinguishedness needs N >= 2")
    else:
        w = theta_kernel_witness(R)
        if w.certified:
            verdict, detail = "Pass", "witnessed: theta(xi) = 0 and xi is distinguished"
        elif not w.theta_vanishes:
            verdict, detail = "Fail", "theta(xi) is nonzero"
        else:
            verdict, detail = "Inconclusive", "theta(xi) = 0 but xi is not distinguished"
        report.add("ker theta is principal", verdict, "paper", detail, xi=[_digit_json(R.carrier, d) for d in w.xi.digits])
        report.payload["witness"] = {"theta_vanishes": w.theta_vanishes, "distinguished": w.distinguished}

    report.add("R is p-adically complete", "Declared", "declared", "completeness of the family is declared, not computed")
    if not isinstance(R, (CharPPerfect, ZpDegenerate)):
        report.add("R is pi-adically complete", "Declared", "declared", "completeness of the family is declared, not computed")
    return report


def _digit_json(k, d):
    if isinstance(k, PerfectMonomialAlg):
        return [[str(e), str(c)] for e, c in k.monomials(d)]
    return [str(c) for c in d]


def image_of_xi_in_special_fiber(w: ThetaKernelWitness, kappa=None) -> WittVector:
    """The unit u with ``image(xi) = p u`` in ``W_{N-1}(kappa)``."""
    R = w.family
    kap, q = special_fiber(R)
    if kappa is not None and kappa != kap:
        raise ValueError(f"{kappa!r} is not the special fiber {kap!r}")
    image = WittVector(kap, [q(d) for d in w.xi.digits])
    if not kap.is_zero(image.digits[0]):
        raise NotUnitMultipleOfP("digit 0 of the image of xi is nonzero")
    if image.length < 2:
        raise NotUnitMultipleOfP("precision exhausted: need N >= 2")
    u = witt_divide_by_p(image)
    if not u.is_unit():
        raise NotUnitMultipleOfP(f"image of xi is p times the non-unit {u!r}")
    return u


def tilt_kernel_radical_test(x, w: ThetaKernelWitness) -> bool:
    """Whether x dies in kappa, cross-checked against ``x^(p^m) in (xi_0)``."""
    R = w.family
    C = R.carrier
    kap, q = special_fiber(R)
    dies = kap.is_zero(q(x))
    xi0 = w.xi.digits[0]
    if C.is_zero(xi0):
        radical = C.is_zero(x)  # perfect, hence reduced
    else:
        if not isinstance(C, PerfectMonomialAlg):
            raise UnsupportedPresentation("radical test needs a monomial carrier")
        terms = C.monomials(xi0)
        if len(terms) != 1:
            raise UnsupportedPresentation(f"xi_0 = {terms} is not a monomial")
        b = terms[0][0]
        e = C.min_exponent(x)
        if e is None:
            radical = True
        elif e == 0:
            radical = False
        else:
            m = 0
            while e * R.p**m < b:
                m += 1
                if m > R.M:
                    raise Inconclusive(f"x^(p^m) reaches (xi_0) only for m > M = {R.M}")
            radical = True
    if radical != dies:
        raise AssertionError("kernel of R^flat -> kappa disagrees with the radical of (xi_0)")
    return dies
