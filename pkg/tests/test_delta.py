import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittkit import NotDistinguished, NotDivisible, UnsupportedPresentation
from wittkit.delta import (
    DeltaRingCarrier,
    OrientedPrismPresentation,
    distinguished_divide,
    is_distinguished,
    prism_report,
    witt_inverse,
)
from wittkit.galois import GaloisRing
from wittkit.perfect import FiniteFieldAlg, PerfectMonomialAlg, PrimeField
from wittkit.series import TruncatedPowerSeries
from wittkit.witt import WittVector, integer_witt, teichmuller, witt_to_padic

F4 = FiniteFieldAlg(2, (1, 1, 1))
WITT_CARRIERS = [DeltaRingCarrier.witt(PrimeField(2), 4), DeltaRingCarrier.witt(PrimeField(3), 3), DeltaRingCarrier.witt(F4, 3)]


def bk(p, N=4, D=8):
    return DeltaRingCarrier.series(GaloisRing.prime(p, N), 1, D)


@st.composite
def carrier_elements(draw):
    C = draw(st.sampled_from(WITT_CARRIERS + [bk(2), bk(3, 3, 6)]))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return C, C.random(rng), C.random(rng)


@given(carrier_elements())
def test_phi_is_frobenius_lift(data):
    C, x, _ = data
    # phi(x) = x^p + p delta(x) at precision N - 1
    lhs = C.lower(C.phi(x), C.N - 1)
    rhs = C.lower(x**C.p, C.N - 1) + C.at_precision(C.N - 1).from_int(C.p) * C.delta(x)
    assert lhs == rhs


@given(carrier_elements())
def test_delta_product_rule(data):
    C, x, y = data
    # delta(xy) = x^p delta(y) + y^p delta(x) + p delta(x) delta(y)
    low = C.at_precision(C.N - 1)
    dx, dy = C.delta(x), C.delta(y)
    x1, y1 = C.lower(x, C.N - 1), C.lower(y, C.N - 1)
    rhs = x1**C.p * dy + y1**C.p * dx + low.from_int(C.p) * dx * dy
    assert C.delta(x * y) == rhs


def test_delta_of_p_in_p_adic_integers():
    assert witt_to_padic(DeltaRingCarrier.witt(PrimeField(2), 4).delta(integer_witt(2, PrimeField(2), 4))).residue == 7
    assert witt_to_padic(DeltaRingCarrier.witt(PrimeField(3), 4).delta(integer_witt(3, PrimeField(3), 4))).residue == 19


@pytest.mark.parametrize("C", WITT_CARRIERS, ids=lambda c: repr(c.k))
def test_p_is_distinguished(C):
    assert is_distinguished(C, C.from_int(C.p))


def test_eisenstein_series_are_distinguished_and_u_is_not():
    C = bk(2)
    assert is_distinguished(C, C.univariate([-2, 1]))
    assert is_distinguished(C, C.univariate([2, 2, 1]))
    assert not is_distinguished(C, C.variable())
    assert C.delta(C.univariate([-2, 1])) == DeltaRingCarrier.series(GaloisRing.prime(2, 3), 1, 8).univariate([5, 2])


def test_witt_inverse():
    C = WITT_CARRIERS[2]
    rng = random.Random(0)
    for _ in range(10):
        x = C.random(rng)
        if x.is_unit():
            assert x * witt_inverse(x) == C.one()


def test_divide_by_p_in_witt_carrier():
    C = WITT_CARRIERS[1]
    q = integer_witt(5, C.k, 2)
    x = integer_witt(15, C.k, 3)
    assert distinguished_divide(C, x, C.from_int(3)) == q
    with pytest.raises(NotDivisible):
        distinguished_divide(C, integer_witt(1, C.k, 3), C.from_int(3))


def test_divide_by_distinguished_series():
    C = bk(2, 4, 10)
    d = C.univariate([-2, 1])
    rng = random.Random(5)
    for _ in range(5):
        q = C.random(rng)
        x = d * q
        q2 = distinguished_divide(C, x, d)
        assert d * TruncatedPowerSeries(q2.ring, 1, C.D, q2.coeffs) == x
    with pytest.raises(NotDivisible):
        distinguished_divide(C, C.one(), d)
    with pytest.raises(NotDistinguished):
        distinguished_divide(C, C.one(), C.variable())


def test_divide_by_xi_over_perfect_monomial_algebra():
    A = PerfectMonomialAlg(2, 8)
    C = DeltaRingCarrier.witt(A, 3)
    t = A.monomial(1)
    xi = integer_witt(2, A, 3) - teichmuller(t, A, 3)
    assert is_distinguished(C, xi)
    q = teichmuller(t, A, 3) + integer_witt(1, A, 3)
    assert distinguished_divide(C, xi * q, xi) == q


def test_prism_reports():
    w = prism_report(OrientedPrismPresentation(WITT_CARRIERS[2], WITT_CARRIERS[2].from_int(2), "W(F_4), (p)"))
    assert w.passed and w.payload["perfect"]
    C = bk(2)
    b = prism_report(OrientedPrismPresentation(C, C.univariate([-2, 1]), "Breuil-Kisin"))
    assert b.passed and not b.payload["perfect"]
    u = prism_report(OrientedPrismPresentation(C, C.variable()))
    assert u.verdict.value == "Fail"
    for r in (w, b, u):
        assert all(c.provenance.value in ("external-standard", "declared") for c in r.checks)


def test_perfectness_flag_only_for_witt_over_perfect_bases():
    assert DeltaRingCarrier.witt(PerfectMonomialAlg(2, 3), 3).is_perfect()[0]
    assert not DeltaRingCarrier.witt(PerfectMonomialAlg(2, 3, Fraction(1)), 3).is_perfect()[0]
    assert not bk(3).is_perfect()[0]


def test_witt_carrier_has_no_variables():
    with pytest.raises(UnsupportedPresentation):
        WITT_CARRIERS[0].variable()
    assert isinstance(WITT_CARRIERS[0].one(), WittVector)
