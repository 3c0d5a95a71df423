import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import ZZ
from sympy.polys.rings import ring

from wittkit import PAdicContext, PrecisionMismatch, ResourceLimit
from wittkit.galois import GaloisRing
from wittkit.perfect import FiniteFieldAlg, PerfectMonomialAlg, PrimeField
from wittkit.witt import (
    WittVector,
    build_witt_cache,
    clear_cache,
    dump_cache,
    integer_witt,
    load_cache,
    padic_to_witt,
    save_cache,
    teichmuller,
    witt_delta,
    witt_divide_by_p,
    witt_frobenius,
    witt_to_padic,
    witt_verschiebung,
)

F4 = FiniteFieldAlg(2, (1, 1, 1))
F8 = FiniteFieldAlg(2, (1, 1, 0, 1))
F9 = FiniteFieldAlg(3, (1, 0, 1))
BASES = [PrimeField(2), PrimeField(3), PrimeField(5), F4, F9]


@st.composite
def witt_triples(draw, bases=BASES, max_len=4):
    k = draw(st.sampled_from(bases))
    N = draw(st.integers(1, max_len))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return [WittVector(k, [k.random(rng) for _ in range(N)]) for _ in range(3)]


@given(witt_triples())
def test_arithmetic_matches_galois_ring_oracle(xs):
    x, y, _ = xs
    G = GaloisRing(x.base, x.length)
    gx, gy = G.from_witt(x), G.from_witt(y)
    assert G.from_witt(x + y) == G.add(gx, gy)
    assert G.from_witt(x * y) == G.mul(gx, gy)
    assert G.from_witt(x - y) == G.sub(gx, gy)
    assert G.to_witt(gx) == x


@given(witt_triples())
def test_ring_axioms(xs):
    x, y, z = xs
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == WittVector(x.base, [x.base.zero] * x.length)


@pytest.mark.parametrize("p,N", [(2, 3), (3, 2), (5, 2)])
def test_prime_field_witt_ring_is_integers_mod_pn(p, N):
    k = PrimeField(p)
    ctx = PAdicContext(p, N)
    for a in ctx.elements():
        assert witt_to_padic(padic_to_witt(a)) == a
    elems = [WittVector(k, d) for d in itertools.product(list(k.elements()), repeat=N)]
    for x, y in itertools.product(elems, repeat=2):
        assert witt_to_padic(x * y) == witt_to_padic(x) * witt_to_padic(y)
        assert witt_to_padic(x + y) == witt_to_padic(x) + witt_to_padic(y)


@pytest.mark.parametrize("p", [2, 3])
def test_ghost_components_of_sum_and_product(p):
    N = 4
    cache = build_witt_cache(p, N)
    names = ",".join(f"x{i},y{i}" for i in range(N))
    R, *gens = ring(names, ZZ)
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


@pytest.mark.parametrize("k", [F4, F8], ids=repr)
def test_teichmuller_is_multiplicative(k):
    N = 4
    lifts = {a: teichmuller(a, k, N) for a in k.elements()}
    for a, b in itertools.product(lifts, repeat=2):
        assert lifts[a] * lifts[b] == lifts[k.mul(a, b)]


@given(witt_triples())
def test_frobenius_verschiebung_relations(xs):
    x = xs[0]
    p = x.p
    assert witt_verschiebung(witt_frobenius(x)) == x * p
    assert witt_frobenius(witt_verschiebung(x)) == x * p
    assert witt_frobenius(x + xs[1]) == witt_frobenius(x) + witt_frobenius(xs[1])


@given(witt_triples(max_len=4))
def test_delta_defines_frobenius_lift(xs):
    x = xs[0]
    if x.length < 2:
        return
    N = x.length
    lhs = witt_frobenius(x).truncate(N - 1)
    d = witt_delta(x)
    # phi(x) = x^p + p delta(x), compared at length N - 1
    rhs = (x**x.p).truncate(N - 1) + witt_verschiebung(witt_frobenius(d))
    assert lhs == rhs


@given(witt_triples())
def test_divide_by_p_inverts_multiplication(xs):
    x = xs[0]
    if x.length < 2:
        return
    assert witt_divide_by_p(x * x.p) == x.truncate(x.length - 1)


def test_integer_witt_over_prime_field():
    k = PrimeField(3)
    for n in range(-30, 30):
        assert witt_to_padic(integer_witt(n, k, 3)).residue == n % 27


def test_monomial_base_arithmetic_matches_digit_rules():
    A = PerfectMonomialAlg(2, 3)
    t = A.monomial(1)
    x = teichmuller(t, A, 3)
    # (V [a]) * [b] = V([a] * F[b]) on Teichmuller representatives
    lhs = witt_verschiebung(x) * teichmuller(t, A, 3)
    rhs = witt_verschiebung(x * witt_frobenius(teichmuller(t, A, 3)))
    assert lhs == rhs


def test_minus_one_over_two():
    k = PrimeField(2)
    assert witt_to_padic(-integer_witt(1, k, 5)).residue == 31


def test_length_and_base_mismatch():
    k = PrimeField(2)
    with pytest.raises(PrecisionMismatch):
        WittVector(k, [(1,)]) + WittVector(k, [(1,), (0,)])
    with pytest.raises(ResourceLimit):
        build_witt_cache(2, 40)
    with pytest.raises(TypeError):
        witt_to_padic(teichmuller(F4.one, F4, 2))


def test_cache_round_trip(tmp_path):
    path = tmp_path / "witt3.json"
    save_cache(path, 3, 3)
    text = dump_cache(3, 3)
    clear_cache()
    load_cache(path)
    assert dump_cache(3, 3) == text
    x = WittVector(PrimeField(3), [(1,), (2,), (1,)])
    assert witt_to_padic(x * x) == witt_to_padic(x) ** 2
