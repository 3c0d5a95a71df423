"""delta-structures, distinguished elements and oriented prism checks.

Two carriers are supported: Witt vectors ``W_N(k)`` over a perfect
F_p-algebra with the Witt Frobenius, and truncated series over ``W_N(k)``
with the Frobenius extended by ``u_i -> u_i^p``. In both, ``delta`` is
``(phi(x) - x^p) / p`` and costs one digit of precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from wittkit.cdvr import weierstrass_degree, weierstrass_divide
from wittkit.errors import (
    DegreeBoundTooSmall,
    InexactDivision,
    NotAUnit,
    NotDistinguished,
    NotDivisible,
    PrecisionMismatch,
    UnsupportedPresentation,
)
from wittkit.galois import GaloisRing
from wittkit.perfect import FiniteFieldAlg, PerfectMonomialAlg
from wittkit.report import Report
from wittkit.series import TruncatedPowerSeries, series_invert
from wittkit.witt import (
    WittVector,
    integer_witt,
    teichmuller,
    witt_divide_by_p,
    witt_frobenius,
)


def witt_inverse(x: WittVector) -> WittVector:
    """Inverse of a unit Witt vector by Newton iteration ``y <- y (2 - x y)``."""
    k = x.base
    if not x.is_unit():
        raise NotAUnit(f"{x!r} has non-invertible digit 0")
    y = teichmuller(k.inverse(x.digits[0]), k, x.length)
    two = integer_witt(2, k, x.length)
    prec = 1
    while prec < x.length:
        y = y * (two - x * y)
        prec *= 2
    return y


def _series_divide_by_p(x: TruncatedPowerSeries) -> TruncatedPowerSeries:
    R = x.ring
    if R.N < 2:
        raise PrecisionMismatch("division by p needs precision N >= 2")
    target = R.at_precision(R.N - 1)
    coeffs = {}
    for m, c in x.coeffs.items():
        if any(v % R.p for v in c):
            raise NotDivisible(f"coefficient of {m} is not divisible by p", obstruction=m)
        coeffs[m] = R.divide_by_p(c)
    return TruncatedPowerSeries(target, x.nvars, x.D, coeffs)


@dataclass(frozen=True)
class DeltaRingCarrier:
    """Either ``W_N(k)`` (``ring`` is None) or ``W_N(k)[[u_1..u_n]]`` truncated at D."""

    k: object
    N: int
    nvars: int = 0
    D: int | None = None

    @classmethod
    def witt(cls, k, N: int) -> DeltaRingCarrier:
        return cls(k, N)

    @classmethod
    def series(cls, ring: GaloisRing, nvars: int, D: int) -> DeltaRingCarrier:
        return cls(ring.k, ring.N, nvars, D)

    @property
    def kind(self) -> str:
        return "series" if self.D is not None else "witt"

    @property
    def p(self) -> int:
        return self.k.p

    @property
    def ring(self) -> GaloisRing:
        return GaloisRing(self.k, self.N)

    def at_precision(self, N: int) -> DeltaRingCarrier:
        return DeltaRingCarrier(self.k, N, self.nvars, self.D)

    # elements

    def from_int(self, n: int):
        if self.kind == "witt":
            return integer_witt(n, self.k, self.N)
        R = self.ring
        return TruncatedPowerSeries.constant(R, self.nvars, self.D, R.from_int(n))

    def one(self):
        return self.from_int(1)

    def variable(self, i: int = 0):
        if self.kind == "witt":
            raise UnsupportedPresentation("Witt carriers have no series variables")
        return TruncatedPowerSeries.variable(self.ring, self.nvars, self.D, i)

    def univariate(self, coeffs):
        if self.kind != "series" or self.nvars != 1:
            raise UnsupportedPresentation("univariate elements need a one-variable series carrier")
        return TruncatedPowerSeries.univariate(self.ring, self.D, coeffs)

    def random(self, rng):
        if self.kind == "witt":
            return WittVector(self.k, [self.k.random(rng) for _ in range(self.N)])
        return TruncatedPowerSeries.random(self.ring, self.nvars, self.D, rng, density=0.6)

    def lower(self, x, N: int):
        if self.kind == "witt":
            return x.truncate(N)
        return x.lower_precision(N)

    def is_unit(self, x) -> bool:
        if self.kind == "witt":
            return x.is_unit()
        return self.ring.at_precision(x.ring.N).is_unit(x.constant_term())

    def inverse(self, x):
        if self.kind == "witt":
            return witt_inverse(x)
        return series_invert(x)

    # delta structure

    def phi(self, x):
        if self.kind == "witt":
            return witt_frobenius(x)
        return x.frobenius_lift()

    def delta(self, x):
        """``(phi(x) - x^p) / p`` at precision N - 1."""
        N = x.length if self.kind == "witt" else x.ring.N
        if N < 2:
            raise PrecisionMismatch("delta needs precision N >= 2")
        diff = self.phi(x) - x**self.p
        if self.kind == "witt":
            if not self.k.is_zero(diff.digits[0]):
                raise InexactDivision("phi(x) - x^p has nonzero digit 0")
            return witt_divide_by_p(diff)
        try:
            return _series_divide_by_p(diff)
        except NotDivisible as exc:
            raise InexactDivision(str(exc)) from exc

    def is_perfect(self) -> tuple[bool, str]:
        """Whether phi is bijective on the carrier, with a one-line reason."""
        if self.kind == "series":
            return False, "u = phi(y) has no solution: phi maps u-degrees into multiples of p"
        k = self.k
        if isinstance(k, PerfectMonomialAlg) and not k.is_perfect:
            return False, f"{k!r} is a truncated monomial algebra, Frobenius is not injective"
        if isinstance(k, FiniteFieldAlg) and k.order <= 4096:
            images = {k.frobenius(a) for a in k.elements()}
            ok = len(images) == k.order
            return ok, f"digitwise Frobenius {'is' if ok else 'is not'} a bijection of the {k.order} residues"
        return True, f"{k!r} is perfect, so the digitwise Frobenius is bijective"


def delta_eval(C: DeltaRingCarrier, x):
    return C.delta(x)


def _digit_is_unit(k, a) -> bool:
    # untruncated monomial algebras stand for the t-adically complete ring,
    # in which anything with nonzero constant term is invertible
    if isinstance(k, PerfectMonomialAlg) and k.is_perfect:
        return k.constant_term(a) != 0
    return k.is_unit(a)


def is_distinguished(C: DeltaRingCarrier, d) -> bool:
    """``delta(d)`` is a unit.

    Unit-ness only depends on the reduction mod p, which survives the loss
    of one digit, so a vanishing constant term is a certified ``False``.
    """
    dd = C.delta(d)
    if C.kind == "witt":
        return _digit_is_unit(C.k, dd.digits[0])
    return dd.ring.is_unit(dd.constant_term())


def distinguished_divide(C: DeltaRingCarrier, x, d):
    """q with ``x = d q`` at the carrier truncation, else NotDivisible."""
    if not is_distinguished(C, d):
        raise NotDistinguished("delta(d) is not a unit")
    if C.kind == "witt":
        return _witt_divide(x, d)
    return _series_divide(x, d)


def _witt_divide(x: WittVector, d: WittVector) -> WittVector:
    k, N = x.base, x.length
    if x.is_zero():
        return x
    d0 = d.digits[0]
    if k.is_zero(d0):
        # d = p w with w a unit; q is only determined at length N - 1
        w = witt_divide_by_p(d)
        if not k.is_zero(x.digits[0]):
            raise NotDivisible("digit 0 of x does not vanish", obstruction=0)
        return witt_divide_by_p(x) * witt_inverse(w)
    if k.is_unit(d0):
        return x * witt_inverse(d)
    # peel one Teichmuller digit at a time: x = sum p^i [q_i] d
    digits = []
    cur = x
    for i in range(N):
        q_i = k.divide(cur.digits[0], d0)
        if q_i is None:
            raise NotDivisible(f"digit {i}: leading digit is not a multiple of d_0", obstruction=i)
        digits.append(q_i)
        if i == N - 1:
            break
        step = cur - d.truncate(cur.length) * teichmuller(q_i, k, cur.length)
        cur = witt_divide_by_p(step)
    q = teichmuller(digits[-1], k, 1)
    for q_i in reversed(digits[:-1]):
        # q <- [q_i] + p q, growing the length by one
        q = teichmuller(q_i, k, q.length + 1) + _times_p(q)
    return q


def _times_p(w: WittVector) -> WittVector:
    """``p w`` at length one more than w, over a perfect base: ``V F``."""
    k = w.base
    return WittVector(k, [k.zero] + [k.frobenius(a) for a in w.digits])


def _series_divide(x: TruncatedPowerSeries, d: TruncatedPowerSeries) -> TruncatedPowerSeries:
    R = d.ring
    if R.is_unit(d.constant_term()):
        return x * series_invert(d)
    e = weierstrass_degree(d)
    if e is not None:
        try:
            q, r = weierstrass_divide(x, d)
        except DegreeBoundTooSmall as exc:
            raise NotDivisible(str(exc)) from exc
        if not r.is_zero():
            lead = min(r.coeffs)
            raise NotDivisible(f"nonzero remainder at monomial {lead}", obstruction=lead)
        return q
    if all(c % R.p == 0 for cs in d.coeffs.values() for c in cs):
        w = _series_divide_by_p(d)
        return _series_divide_by_p(x) * series_invert(w)
    raise UnsupportedPresentation("divisor is neither p times a unit nor Weierstrass in the last variable")


@dataclass
class OrientedPrismPresentation:
    carrier: DeltaRingCarrier
    d: object
    name: str = ""
    verdicts: dict = field(default_factory=dict)


def prism_report(P: OrientedPrismPresentation) -> Report:
    """Axiom check for ``(A, (d))``; every prism axiom is flagged as external-standard."""
    C, d = P.carrier, P.d
    report = Report(f"prism {P.name}".strip())
    N = d.length if C.kind == "witt" else d.ring.N
    if N < 2:
        report.add("d is distinguished", "Inconclusive", "external-standard", "precision N >= 2 required")
    else:
        dd = C.delta(d)
        dist = is_distinguished(C, d)
        report.add(
            "d is distinguished",
            "Pass" if dist else "Fail",
            "external-standard",
            "delta(d) has unit constant term" if dist else "delta(d) is not a unit",
        )
        if dist and C.kind == "witt" and not C.is_unit(dd):
            report.add(
                "p lies in (d, phi(d))",
                "Inconclusive",
                "external-standard",
                "delta(d) is only invertible in the t-adic completion of the carrier",
            )
        elif dist:
            # p = a d + b phi(d) with b = delta(d)^-1 and a = -b d^(p-1)
            low = C.at_precision(N - 1)
            d1 = C.lower(d, N - 1)
            b = low.inverse(dd)
            a = -(b * d1 ** (C.p - 1))
            lhs = a * d1 + b * low.phi(d1)
            ok = lhs == low.from_int(C.p) if C.kind == "witt" else lhs.agrees_with(low.from_int(C.p))
            report.add(
                "p lies in (d, phi(d))",
                "Pass" if ok else "Fail",
                "external-standard",
                f"explicit combination verified at precision {N - 1}",
            )
        else:
            report.add("p lies in (d, phi(d))", "Inconclusive", "external-standard", "d is not distinguished")
    report.add("(p, d)-adically complete", "Declared", "declared", "completeness is a declaration, not computed")
    # perfectness is a property of the prism, not an axiom, so it never fails the report
    perfect, why = C.is_perfect()
    report.payload["perfect"] = perfect
    report.payload["perfect_reason"] = why
    P.verdicts = {c.name: c.verdict.value for c in report.checks}
    return report
