import random
from fractions import Fraction

import pytest

from wittkit import InsufficientDepth, NotUnitMultipleOfP
from wittkit.perfect import FiniteFieldAlg, PrimeField
from wittkit.tilt import (
    CharPPerfect,
    Cyclotomic,
    SelfRamified,
    ZpDegenerate,
    fontaine_theta,
    image_of_xi_in_special_fiber,
    perfectoid_report,
    sharp,
    theta_kernel_witness,
    theta_preimage,
    tilt_kernel_radical_test,
)
from wittkit.witt import WittVector

F4 = FiniteFieldAlg(2, (1, 1, 1))
SR = SelfRamified(2, 6, 4)
CYC = Cyclotomic(3, 4, 3)
FAMILIES = [SR, CYC, CharPPerfect(F4, 3)]


def random_witt(R, rng):
    C = R.carrier
    return WittVector(C, [C.random(rng) for _ in range(R.N)])


@pytest.mark.parametrize("R", FAMILIES, ids=repr)
def test_sharp_is_lift_independent_and_multiplicative(R):
    rng = random.Random(7)
    for _ in range(5):
        x, y = R.carrier.random(rng), R.carrier.random(rng)
        a, b = R.tilt_element(x), R.tilt_element(y)
        values = {sharp(a, random.Random(s)) for s in range(10)}
        assert len(values) == 1
        assert sharp(a * b, rng) == R.mul(sharp(a, rng), sharp(b, rng))


def test_sharp_of_distinguished_roots():
    assert sharp(SR.tilt_element(SR.p_flat()), random.Random(1)) == SR.from_int(2)
    eps = CYC.tilt_element(CYC.epsilon_root(CYC.carrier))
    assert sharp(eps, random.Random(2)) == CYC.zeta(1)


@pytest.mark.parametrize("R", FAMILIES, ids=repr)
def test_theta_is_a_ring_homomorphism(R):
    rng = random.Random(11)
    for _ in range(25):
        x, y = random_witt(R, rng), random_witt(R, rng)
        tx, ty = fontaine_theta(x, R, rng), fontaine_theta(y, R, rng)
        assert fontaine_theta(x + y, R, rng) == R.add(tx, ty)
        assert fontaine_theta(x * y, R, rng) == R.mul(tx, ty)


@pytest.mark.parametrize("R", FAMILIES, ids=repr)
def test_theta_kills_distinguished_witness(R):
    w = theta_kernel_witness(R)
    assert w.certified
    assert R.is_zero(fontaine_theta(w.xi, R))


@pytest.mark.parametrize("R", [SR, CYC], ids=repr)
def test_theta_preimage_round_trip(R):
    rng = random.Random(3)
    for _ in range(10):
        y = fontaine_theta(random_witt(R, rng), R)
        assert fontaine_theta(theta_preimage(y, R), R) == y
        z = R.level_subring_random(rng)
        assert fontaine_theta(theta_preimage(z, R), R) == z


def test_theta_preimage_rejects_elements_outside_the_image():
    with pytest.raises(ValueError):
        theta_preimage(SR.gen(), SR)


@pytest.mark.parametrize("R", FAMILIES, ids=repr)
def test_perfectoid_families_pass(R):
    report = perfectoid_report(R)
    assert report.passed
    assert {c.provenance.value for c in report.checks} <= {"paper", "declared"}


def test_zp_is_not_perfectoid():
    report = perfectoid_report(ZpDegenerate(2, 4))
    assert report.verdict.value == "Fail"
    assert report["p lies in pi^p R"].verdict.value == "Fail"
    assert "complete" in report["p lies in pi^p R"].detail
    with pytest.raises(NotUnitMultipleOfP):
        image_of_xi_in_special_fiber(theta_kernel_witness(ZpDegenerate(2, 4)))


@pytest.mark.parametrize("R", FAMILIES, ids=repr)
def test_image_of_xi_is_p_times_unit(R):
    u = image_of_xi_in_special_fiber(theta_kernel_witness(R))
    assert u.is_unit()
    if not isinstance(R, Cyclotomic):
        assert u == WittVector(u.base, [u.base.one] + [u.base.zero] * (u.length - 1))


def test_radical_membership():
    w = theta_kernel_witness(SR)
    C = SR.carrier
    results = [
        tilt_kernel_radical_test(x, w)
        for x in (C.zero, C.one, C.monomial(Fraction(1, 2)), C.add(C.one, C.monomial(Fraction(1, 8))))
    ]
    assert results == [True, False, True, False]


def test_depth_errors():
    a = SR.tilt_element(SR.p_flat(), depth=2)
    with pytest.raises(InsufficientDepth):
        sharp(a)
    with pytest.raises(InsufficientDepth):
        SelfRamified(2, 2, 4)
    with pytest.raises(InsufficientDepth):
        Cyclotomic(3, 2, 3)


def test_zp_special_fiber_is_prime_field():
    R = ZpDegenerate(3, 3)
    assert R.residue_presentation().quotient.limit == 1
    w = theta_kernel_witness(R)
    assert w.theta_vanishes and not w.distinguished
    assert PrimeField(3) == R.carrier
