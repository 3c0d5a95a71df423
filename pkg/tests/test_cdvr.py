import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittkit import AtLeast, ConstantTermNotP, DegreeBoundTooSmall
from wittkit.cdvr import (
    CDVRQuotient,
    EisensteinPoly,
    TruncatedQuotient,
    cdvr_valuation,
    cdvr_valuation_formula,
    koszul_homology,
    long_division,
    regular_local_kernel_generator,
    weierstrass_divide,
    weierstrass_precision,
    weierstrass_reduce,
)
from wittkit.galois import GaloisRing
from wittkit.perfect import FiniteFieldAlg, PrimeField
from wittkit.series import TruncatedPowerSeries, series_invert

E_SQ = EisensteinPoly.from_ints(3, 4, [3, 0])  # u^2 + 3
EXAMPLES = [
    E_SQ,
    EisensteinPoly.from_ints(2, 4, [2, 2]),  # u^2 + 2u + 2
    EisensteinPoly.from_ints(2, 4, [-2]),  # u - 2
    EisensteinPoly.from_ints(5, 3, [5, 10, 0]),
    EisensteinPoly(GaloisRing(FiniteFieldAlg(2, (1, 1, 1)), 3), ((2, 0), (0, 2))),
]


def test_eisenstein_validation():
    for bad in ([9, 0], [3, 1], []):
        with pytest.raises(ValueError):
            EisensteinPoly.from_ints(3, 4, bad)
    with pytest.raises(ValueError):
        EisensteinPoly.from_ints(3, 1, [3])


def test_valuations_in_sqrt_minus_three_ring():
    A = CDVRQuotient(E_SQ)
    assert cdvr_valuation(A, A.from_int(3)) == 2 == E_SQ.degree
    assert cdvr_valuation(A, A.uniformizer) == 1
    assert cdvr_valuation(A, A.from_int(9)) == 4
    assert cdvr_valuation(A, A.zero) == AtLeast(8)
    assert A.residue_field() == PrimeField(3)
    assert A.residue(A.from_int(4)) == (1,)


@st.composite
def cdvr_elements(draw):
    E = draw(st.sampled_from(EXAMPLES))
    A = CDVRQuotient(E)
    rng = random.Random(draw(st.integers(0, 2**32)))
    return A, tuple(A.ring.random(rng) for _ in range(A.e)), tuple(A.ring.random(rng) for _ in range(A.e))


@given(cdvr_elements())
def test_valuation_matches_coefficient_formula(data):
    A, x, _ = data
    assert cdvr_valuation(A, x) == cdvr_valuation_formula(A, x)


@given(cdvr_elements())
def test_valuation_is_additive_on_products(data):
    A, x, y = data
    vx, vy = cdvr_valuation(A, x), cdvr_valuation(A, y)
    if isinstance(vx, int) and isinstance(vy, int) and vx + vy < A.e * A.ring.N:
        assert cdvr_valuation(A, A.mul(x, y)) == vx + vy


@given(cdvr_elements())
def test_divide_by_uniformizer_inverts_multiplication(data):
    A, x, _ = data
    y = A.mul(A.uniformizer, x)
    back = A.divide_by_uniformizer(y)
    # the quotient is pinned down only modulo u^(eN - 1)
    diff = A.sub(back, x)
    v = cdvr_valuation(A, diff)
    assert isinstance(v, AtLeast) or v >= A.e * A.ring.N - 1


def test_uniformizer_power_e_is_p_times_unit():
    for E in EXAMPLES:
        A = CDVRQuotient(E)
        ue = A.pow(A.uniformizer, E.degree)
        assert cdvr_valuation(A, ue) == E.degree
        assert cdvr_valuation(A, A.from_int(E.p)) == E.degree


@pytest.mark.parametrize("seed", range(5))
def test_weierstrass_reduce_matches_long_division(seed):
    rng = random.Random(seed)
    E = E_SQ
    R = E.ring
    for _ in range(20):
        D = rng.randrange(E.degree, 14)
        f = [R.random(rng) for _ in range(D)]
        _, r = long_division(f, E)
        assert weierstrass_reduce(TruncatedPowerSeries.univariate(R, D, f), E) == r


def test_reduce_needs_room():
    with pytest.raises(DegreeBoundTooSmall):
        weierstrass_reduce(TruncatedPowerSeries.univariate(E_SQ.ring, 1, [1]), E_SQ)
    assert weierstrass_precision(5, 2, 4) == 2


@pytest.mark.parametrize("E", EXAMPLES[:4])
def test_one_minus_eisenstein_is_invertible(E):
    D = 12
    one = TruncatedPowerSeries.one(E.ring, 1, D)
    f = one - E.as_series(D)
    assert f * series_invert(f) == one


@pytest.mark.parametrize("seed", range(4))
def test_weierstrass_division_round_trip(seed):
    rng = random.Random(seed)
    E = EXAMPLES[1]
    R, D = E.ring, 10
    g = E.as_series(D)
    f = TruncatedPowerSeries.random(R, 1, D, rng)
    q, r = weierstrass_divide(f, g)
    assert all(m[-1] < E.degree for m in r.coeffs)
    assert TruncatedPowerSeries(R, 1, D, q.coeffs) * g + r == f


def test_kernel_generator_for_u_minus_p():
    phi = EisensteinPoly.from_ints(2, 4, [-2]).as_series(8)
    report = regular_local_kernel_generator(phi, seed=3)
    assert report.passed
    gen = report["kernel is generated by phi"].data
    assert gen["generator"] and gen["unit"]


def test_kernel_generator_degree_two():
    phi = EXAMPLES[1].as_series(8)
    assert regular_local_kernel_generator(phi, seed=1).passed


def test_kernel_generator_rejects_wrong_constant_term():
    R = GaloisRing.prime(2, 4)
    with pytest.raises(ConstantTermNotP):
        regular_local_kernel_generator(TruncatedPowerSeries.univariate(R, 6, [4, 1]))
    with pytest.raises(ConstantTermNotP):
        regular_local_kernel_generator(TruncatedPowerSeries.univariate(R, 6, [1, 1]))


def test_bivariate_kernel_generator():
    R = GaloisRing.prime(2, 3)
    phi = TruncatedPowerSeries(R, 2, 5, {(0, 0): 2, (1, 0): 1, (0, 1): 1})
    assert regular_local_kernel_generator(phi, seed=0, samples=3).passed


def test_koszul_regular_and_non_regular_sequences():
    R = GaloisRing.prime(2, 3)
    Q = TruncatedQuotient(R, 2, 5)
    u1, u2 = (TruncatedPowerSeries.variable(R, 2, 5, i) for i in range(2))
    good = koszul_homology([u1, u2], Q)
    assert good.h1_vanishes and good.h0_exponents == [3]
    bad = koszul_homology([u1, u1], Q)
    assert not bad.h1_vanishes and bad.witness is not None


def test_koszul_on_quotient_by_eisenstein():
    R = GaloisRing.prime(3, 3)
    D = 6
    E = TruncatedPowerSeries.univariate(R, D, [3, 0, 1])
    Q = TruncatedQuotient(R, 1, D, (E,))
    u = TruncatedPowerSeries.variable(R, 1, D, 0)
    res = koszul_homology([u], Q)
    assert res.h1_vanishes and res.h0_exponents == [1]
