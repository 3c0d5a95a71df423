"""Acceptance criteria 1-12, one test each, with their runtime limits."""

import itertools
import json
import random
import time
from contextlib import contextmanager

import pytest
from sample_documents import COMMANDS, SELF_RAMIFIED, WITT_F2, ZP
from sympy import ZZ
from sympy.polys.rings import ring

from wittkit.cdvr import (
    CDVRQuotient,
    EisensteinPoly,
    TruncatedQuotient,
    cdvr_valuation,
    koszul_homology,
    long_division,
    regular_local_kernel_generator,
    weierstrass_divide,
    weierstrass_reduce,
)
from wittkit.cli import main
from wittkit.delta import DeltaRingCarrier, OrientedPrismPresentation, is_distinguished, prism_report
from wittkit.galois import GaloisRing
from wittkit.hochschild import periodicity_table
from wittkit.lifting import TruncatedNilAlg, unique_lift
from wittkit.perfect import FiniteFieldAlg, PrimeField
from wittkit.series import TruncatedPowerSeries, series_invert
from wittkit.tilt import (
    CharPPerfect,
    Cyclotomic,
    SelfRamified,
    fontaine_theta,
    image_of_xi_in_special_fiber,
    sharp,
    theta_kernel_witness,
)
from wittkit.witt import WittVector, build_witt_cache, clear_cache, teichmuller, witt_to_padic

F4 = FiniteFieldAlg(2, (1, 1, 1))
F8 = FiniteFieldAlg(2, (1, 1, 0, 1))


@contextmanager
def time_limit(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f} s, limit {seconds} s"


def test_01_witt_ring_of_f2_length_3_is_z_mod_8():
    clear_cache()
    with time_limit(1):
        k = PrimeField(2)
        elems = [WittVector(k, d) for d in itertools.product(list(k.elements()), repeat=3)]
        value = {x: witt_to_padic(x).residue for x in elems}
        assert sorted(value.values()) == list(range(8))
        for x, y in itertools.product(elems, repeat=2):
            assert value[x + y] == (value[x] + value[y]) % 8
            assert value[x * y] == value[x] * value[y] % 8


@pytest.mark.parametrize("p", [2, 3])
def test_02_ghost_components_of_sum_and_product_polynomials(p):
    clear_cache()
    with time_limit(5):
        N = 4
        cache = build_witt_cache(p, N)
        R, *gens = ring(",".join(f"x{i},y{i}" for i in range(N)), ZZ)
        xs, ys = gens[0::2], gens[1::2]

        def ghost(vs, n):
            return sum((p**i * vs[i] ** (p ** (n - i)) for i in range(n + 1)), R.zero)

        def as_poly(d):
            return sum((c * R.from_dict({m + (0,) * (2 * N - len(m)): 1}) for m, c in d.items()), R.zero)

        S = [as_poly(cache.sum_poly(n)) for n in range(N)]
        P = [as_poly(cache.product_poly(n)) for n in range(N)]
        for n in range(N):
            assert ghost(S, n) == ghost(xs, n) + ghost(ys, n)
            assert ghost(P, n) == ghost(xs, n) * ghost(ys, n)


def test_03_teichmuller_is_multiplicative_over_f4_and_f8():
    with time_limit(5):
        for k in (F4, F8):
            lifts = {a: teichmuller(a, k, 4) for a in k.elements()}
            for a, b in itertools.product(lifts, repeat=2):
                assert lifts[a] * lifts[b] == lifts[k.mul(a, b)]


def test_04_sharp_and_theta_on_self_ramified_and_cyclotomic_towers():
    with time_limit(30):
        for R in (SelfRamified(2, 6, 4), Cyclotomic(3, 4, 3)):
            rng = random.Random(2024)
            C = R.carrier
            for _ in range(5):
                a = R.tilt_element(C.random(rng))
                assert len({sharp(a, random.Random(seed)) for seed in range(10)}) == 1
            for _ in range(100):
                x = WittVector(C, [C.random(rng) for _ in range(R.N)])
                y = WittVector(C, [C.random(rng) for _ in range(R.N)])
                tx, ty = fontaine_theta(x, R, rng), fontaine_theta(y, R, rng)
                assert fontaine_theta(x + y, R, rng) == R.add(tx, ty)
                assert fontaine_theta(x * y, R, rng) == R.mul(tx, ty)
            assert R.is_zero(fontaine_theta(R.xi(), R, rng))


def test_05_image_of_xi_in_special_fiber_is_p_times_unit():
    with time_limit(10):
        for R in (CharPPerfect(F4, 3), SelfRamified(2, 6, 4), Cyclotomic(3, 4, 3)):
            u = image_of_xi_in_special_fiber(theta_kernel_witness(R))
            assert u.is_unit()
            one = WittVector(u.base, [u.base.one] + [u.base.zero] * (u.length - 1))
            if not isinstance(R, Cyclotomic):
                assert u == one


def test_06_unique_lift_is_independent_of_preimages():
    with time_limit(5):
        Dbar = TruncatedNilAlg(F4, 2)
        lifts = [unique_lift(F4, lambda a: a, Dbar, rng=random.Random(seed)) for seed in range(10)]
        assert len({L.generator_images for L in lifts}) == 1
        (image,) = lifts[0].generator_images
        for rel in F4.relations():
            assert Dbar.evaluate_poly(rel, image) == Dbar.zero
        assert Dbar.project(image) == F4.gen


def test_07_cdvr_of_u_squared_plus_three():
    with time_limit(10):
        E = EisensteinPoly.from_ints(3, 4, [3, 0])
        A = CDVRQuotient(E)
        assert cdvr_valuation(A, A.from_int(3)) == 2 == E.degree
        assert cdvr_valuation(A, A.uniformizer) == 1
        assert A.residue_field() == PrimeField(3)
        rng = random.Random(7)
        R = E.ring
        for _ in range(100):
            D = rng.randrange(2, 16)
            f = [R.random(rng) for _ in range(D)]
            assert weierstrass_reduce(TruncatedPowerSeries.univariate(R, D, f), E) == long_division(f, E)[1]


def test_08_one_minus_eisenstein_is_invertible():
    with time_limit(5):
        examples = [
            EisensteinPoly.from_ints(3, 4, [3, 0]),
            EisensteinPoly.from_ints(2, 4, [2, 2]),
            EisensteinPoly.from_ints(5, 4, [5, 0, 10]),
        ]
        for E in examples:
            one = TruncatedPowerSeries.one(E.ring, 1, 12)
            f = one - E.as_series(12)
            assert f * series_invert(f) == one


def test_09_kernel_generator_for_u_minus_p():
    with time_limit(30):
        E = EisensteinPoly.from_ints(2, 4, [-2])
        R, D = E.ring, 8
        phi = E.as_series(D)
        report = regular_local_kernel_generator(phi, seed=9)
        assert all(c.verdict.value == "Pass" for c in report.checks)
        data = report["kernel is generated by phi"].data

        def decode(terms):
            return TruncatedPowerSeries(R, 1, D, {tuple(map(int, m)): tuple(map(int, c)) for m, c in terms})

        g, unit = decode(data["generator"]), decode(data["unit"])
        assert R.is_unit(unit.constant_term())
        q, r = weierstrass_divide(g, phi)
        assert r.is_zero() and (TruncatedPowerSeries(R, 1, D, q.coeffs) * phi).agrees_with(g, D=D - 1)

        R2 = GaloisRing.prime(2, 3)
        Q = TruncatedQuotient(R2, 2, 5)
        us = [TruncatedPowerSeries.variable(R2, 2, 5, i) for i in range(2)]
        assert koszul_homology(us, Q).h1_vanishes


def test_10_prism_predicates():
    with time_limit(5):
        for p in (2, 3):
            C = DeltaRingCarrier.witt(PrimeField(p), 4)
            assert is_distinguished(C, C.from_int(p))
        BK = DeltaRingCarrier.series(GaloisRing.prime(2, 4), 1, 8)
        for coeffs in ([-2, 1], [2, 2, 1]):
            assert is_distinguished(BK, BK.univariate(coeffs))
        assert not is_distinguished(BK, BK.variable())
        witt_carriers = [DeltaRingCarrier.witt(k, 3) for k in (PrimeField(2), PrimeField(3), F4)]
        series_carriers = [BK, DeltaRingCarrier.series(GaloisRing.prime(3, 3), 1, 6)]
        for C in witt_carriers:
            assert prism_report(OrientedPrismPresentation(C, C.from_int(C.p))).payload["perfect"] is True
        for C in series_carriers:
            d = C.univariate([-C.p, 1])
            assert prism_report(OrientedPrismPresentation(C, d)).payload["perfect"] is False


def test_11_hochschild_periodicity_for_x_over_f2_and_f3():
    with time_limit(60):
        for p in (2, 3):
            table = periodicity_table(p, [0, 1], 6)
            S = table.groups[0]
            for m, g in enumerate(table.groups):
                if m % 2:
                    assert g.is_zero()
                else:
                    assert g == S and g.free_rank == 0 and g.torsion == ((0, 1),)


def test_12_cli_is_deterministic_with_conforming_exit_codes(tmp_path, capsys):
    def run(argv, document):
        path = tmp_path / "doc.json"
        path.write_text(document if isinstance(document, str) else json.dumps(document))
        code = main([*argv, "--input", str(path)])
        return code, capsys.readouterr().out

    with time_limit(10):
        for argv, document, seed in COMMANDS:
            full = argv + (["--seed", str(seed)] if seed is not None else [])
            first, second = run(full, document), run(full, document)
            assert first == second, argv
            assert first[0] == 0, argv
        assert run(["theta", "report"], ZP)[0] == 1
        assert run(["theta", "sharp", "--seed", "1"], {**SELF_RAMIFIED, "L": "2"})[0] == 1
        assert run(["witt", "mul"], "{not json")[0] == 2
        assert run(["theta", "sharp"], SELF_RAMIFIED)[0] == 2
        assert run(["witt", "mul"], {**WITT_F2, "extra": "1"})[0] == 2
