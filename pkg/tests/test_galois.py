import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittkit import AtLeast, NotAUnit
from wittkit.galois import GaloisRing
from wittkit.perfect import FiniteFieldAlg

RINGS = [GaloisRing.prime(2, 4), GaloisRing.prime(3, 3), GaloisRing(FiniteFieldAlg(2, (1, 1, 1)), 3), GaloisRing(FiniteFieldAlg(3, (1, 0, 1)), 2)]


@st.composite
def elements(draw):
    R = draw(st.sampled_from(RINGS))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return R, R.random(rng), R.random(rng)


@given(elements())
def test_inverse_and_valuation(data):
    R, a, b = data
    if R.is_unit(a):
        assert R.mul(a, R.inverse(a)) == R.one
    else:
        with pytest.raises(NotAUnit):
            R.inverse(a)
    v = R.valuation(R.scale(b, R.p))
    assert v == AtLeast(R.N) or v >= 1


@given(elements())
def test_teichmuller_expansion_round_trip(data):
    R, a, _ = data
    x = R.to_witt(a)
    assert R.from_witt(x) == a


@given(elements())
def test_frobenius_is_a_ring_map(data):
    R, a, b = data
    F = R.frobenius
    assert F(R.mul(a, b)) == R.mul(F(a), F(b))
    assert F(R.add(a, b)) == R.add(F(a), F(b))
    assert R.residue(F(a)) == R.k.frobenius(R.residue(a))


def test_teichmuller_is_fixed_by_q_power():
    R = RINGS[2]
    for x in R.k.elements():
        t = R.teichmuller(x)
        assert R.pow(t, R.k.order) == t and R.residue(t) == x


def test_divide_by_p_lowers_precision():
    R = GaloisRing.prime(3, 3)
    assert R.divide_by_p(R.from_int(21)) == (7,)
    with pytest.raises(NotAUnit):
        R.divide_by_p(R.from_int(2))
