"""Eisenstein polynomials, totally ramified CDVR quotients and Koszul checks.

The CDVR ``A = W_N(k)[u]/(E)`` is stored in the basis ``1, u, ..., u^(e-1)``;
the class of ``u`` is the uniformizer. Koszul homology is computed by exact
linear algebra over Z/p^N on the monomial basis of truncated series rings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from wittkit.errors import ConstantTermNotP, DegreeBoundTooSmall, Inconclusive
from wittkit.galois import GaloisRing
from wittkit.linalg import smith_local
from wittkit.padic import AtLeast
from wittkit.report import Report
from wittkit.series import TruncatedPowerSeries, monomials_below, series_invert


@dataclass(frozen=True)
class EisensteinPoly:
    """Monic ``u^e + sum a_j u^j`` with ``p | a_j`` and ``p^2`` not dividing ``a_0``."""

    ring: GaloisRing
    coeffs: tuple  # a_0 .. a_{e-1}, ring elements

    def __post_init__(self):
        R = self.ring
        cs = tuple(R.from_int(c) if isinstance(c, int) else R.element(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if not cs:
            raise ValueError("an Eisenstein polynomial has degree >= 1")
        if R.N < 2:
            raise ValueError("certifying p^2 does not divide a_0 needs precision N >= 2")
        for j, a in enumerate(cs):
            if R.is_unit(a):
                raise ValueError(f"a_{j} = {a} is not divisible by p")
        if R.valuation(cs[0]) != 1:
            raise ValueError(f"a_0 = {cs[0]} is divisible by p^2")

    @classmethod
    def from_ints(cls, p: int, N: int, coeffs, k=None) -> EisensteinPoly:
        ring = GaloisRing(k, N) if k is not None else GaloisRing.prime(p, N)
        return cls(ring, tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def p(self) -> int:
        return self.ring.p

    def polynomial(self) -> list:
        """Coefficients ``[a_0, ..., a_{e-1}, 1]``."""
        return list(self.coeffs) + [self.ring.one]

    def as_series(self, D: int) -> TruncatedPowerSeries:
        return TruncatedPowerSeries.univariate(self.ring, D, self.polynomial())


@dataclass(frozen=True)
class CDVRQuotient:
    E: EisensteinPoly

    @property
    def ring(self) -> GaloisRing:
        return self.E.ring

    @property
    def e(self) -> int:
        return self.E.degree

    def element(self, coeffs):
        R = self.ring
        coeffs = [R.from_int(c) if isinstance(c, int) else tuple(c) for c in coeffs]
        return self.reduce_poly(coeffs)

    def reduce_poly(self, coeffs):
        """Normal form of a polynomial (list of ring elements) modulo E."""
        R, e = self.ring, self.e
        c = list(coeffs) + [R.zero] * max(0, e - len(coeffs))
        a = self.E.coeffs
        for i in range(len(c) - 1, e - 1, -1):
            top = c[i]
            if R.is_zero(top):
                continue
            c[i] = R.zero
            for j in range(e):
                c[i - e + j] = R.sub(c[i - e + j], R.mul(top, a[j]))
        return tuple(c[:e])

    @property
    def zero(self):
        return (self.ring.zero,) * self.e

    @property
    def one(self):
        return (self.ring.one,) + (self.ring.zero,) * (self.e - 1)

    @property
    def uniformizer(self):
        return self.reduce_poly([self.ring.zero, self.ring.one])

    def from_int(self, n: int):
        return (self.ring.from_int(n),) + (self.ring.zero,) * (self.e - 1)

    def add(self, x, y):
        return tuple(self.ring.add(a, b) for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(self.ring.sub(a, b) for a, b in zip(x, y))

    def mul(self, x, y):
        R = self.ring
        prod = [R.zero] * (2 * self.e - 1)
        for i, a in enumerate(x):
            if R.is_zero(a):
                continue
            for j, b in enumerate(y):
                prod[i + j] = R.add(prod[i + j], R.mul(a, b))
        return self.reduce_poly(prod)

    def pow(self, x, n: int):
        out = self.one
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def is_zero(self, x) -> bool:
        return all(self.ring.is_zero(c) for c in x)

    def residue(self, x):
        """Image in ``A / (uniformizer) = k``."""
        return self.ring.residue(x[0])

    def residue_field(self):
        return self.ring.k

    def divide_by_uniformizer(self, x):
        """Some y with ``u * y = x``; ``x`` must reduce to 0 in the residue field.

        Loses one u-adic digit of precision: y is determined modulo
        ``u^(eN - 1)`` when ``x`` is known modulo ``u^(eN)``.
        """
        R, e = self.ring, self.e
        a = self.E.coeffs
        c0 = x[0]
        if R.is_unit(c0):
            raise ArithmeticError("element is a unit, not divisible by the uniformizer")
        # a_0 = p w with w a unit; c_0 / p and w are only known mod p^(N-1),
        # which is harmless because the error gets multiplied by a_0.
        p = R.p
        winv = R.inverse(tuple(c // p for c in a[0]))
        c0_over_p = tuple(c // p for c in c0)
        y = [R.zero] * e
        y[e - 1] = R.neg(R.mul(c0_over_p, winv))
        for j in range(1, e):
            y[j - 1] = R.add(x[j], R.mul(y[e - 1], a[j]))
        return tuple(y)


def cdvr_valuation(A: CDVRQuotient, x):
    """Valuation by repeated exact division by the uniformizer.

    Elements are known modulo ``p^N = u^(eN) * unit``, so values below
    ``eN`` are exact and anything else is reported as ``AtLeast``.
    """
    bound = A.e * A.ring.N
    v = 0
    cur = x
    while v < bound:
        if A.ring.is_unit(cur[0]):
            return v
        cur = A.divide_by_uniformizer(cur)
        v += 1
    return AtLeast(bound)


def cdvr_valuation_formula(A: CDVRQuotient, x):
    """``min_j (e * v_p(c_j) + j)``; terms have distinct residues mod e."""
    e, N = A.e, A.ring.N
    exact, bound = None, None
    for j, c in enumerate(x):
        v = A.ring.valuation(c)
        if isinstance(v, AtLeast):
            b = e * N + j
            bound = b if bound is None else min(bound, b)
        else:
            t = e * v + j
            exact = t if exact is None else min(exact, t)
    if exact is not None and (bound is None or exact < bound):
        return exact
    return AtLeast(min(bound, e * N))


def weierstrass_precision(D: int, e: int, N: int) -> int:
    """p-adic digits of a remainder that the degree bound D actually determines."""
    return min(N, D // e)


def weierstrass_reduce(f: TruncatedPowerSeries, E: EisensteinPoly):
    """Remainder of degree < e with ``f = q E + r`` modulo ``(p^N, u^D)``.

    Computed from the table of ``u^j mod E``; the schoolbook long division
    gives the same normal form. Only ``weierstrass_precision(D, e, N)``
    digits are determined by the truncated input.
    """
    if f.nvars != 1:
        raise ValueError("weierstrass_reduce expects a univariate series")
    e = E.degree
    if f.D < e:
        raise DegreeBoundTooSmall(f"degree bound {f.D} < deg E = {e}")
    A = CDVRQuotient(E)
    R = A.ring
    table = [A.one]
    u = A.reduce_poly([R.zero, R.one])
    while len(table) < f.D:
        table.append(A.mul(table[-1], u))
    r = A.zero
    for (j,), c in f.coeffs.items():
        r = A.add(r, tuple(R.mul(c, t) for t in table[j]))
    return r


def long_division(f_coeffs: list, E: EisensteinPoly):
    """Schoolbook division of a polynomial by the monic E; returns (q, r)."""
    R = E.ring
    e = E.degree
    c = list(f_coeffs)
    mod = E.polynomial()
    q = [R.zero] * max(len(c) - e, 0)
    for i in range(len(c) - 1, e - 1, -1):
        top = c[i]
        if R.is_zero(top):
            continue
        q[i - e] = top
        for j in range(e + 1):
            c[i - e + j] = R.sub(c[i - e + j], R.mul(top, mod[j]))
    r = c[:e] + [R.zero] * max(0, e - len(c))
    return q, tuple(r)


def weierstrass_degree(g: TruncatedPowerSeries) -> int | None:
    """Smallest e with the coefficient of ``u_n^e`` (others zero) a unit."""
    R = g.ring
    n = g.nvars
    for e in range(g.D):
        mono = (0,) * (n - 1) + (e,)
        if R.is_unit(g.coefficient(mono)):
            return e
    return None


def weierstrass_divide(f: TruncatedPowerSeries, g: TruncatedPowerSeries, max_iter: int | None = None):
    """``(q, r)`` with ``f = q g + r`` mod ``(p^N, degree D)``, ``deg_{u_n} r < e``.

    ``e`` is the Weierstrass degree of g in the last variable. Solved by the
    contraction ``q <- g_high^-1 * H(f - q g_low)``; ``q`` carries the honest
    degree bound ``D - e``.
    """
    e = weierstrass_degree(g)
    if e is None:
        raise Inconclusive("divisor has no unit pure power of the last variable within the truncation")
    n, D, R = g.nvars, min(f.D, g.D), g.ring
    if D <= e:
        raise DegreeBoundTooSmall(f"degree bound {D} <= Weierstrass degree {e}")

    def split(h):
        low, high = {}, {}
        for m, c in h.coeffs.items():
            if m[-1] < e:
                low[m] = c
            else:
                high[m[:-1] + (m[-1] - e,)] = c
        return TruncatedPowerSeries(R, n, D, low), TruncatedPowerSeries(R, n, D - e, high)

    g_low, g_high = split(g.truncate(D))
    g_high_inv = series_invert(g_high)
    f = f.truncate(D)
    q = TruncatedPowerSeries.zero(R, n, D - e)
    limit = max_iter or (R.N + D + 2)
    for _ in range(limit):
        q_wide = TruncatedPowerSeries(R, n, D, q.coeffs)
        _, high = split(f - q_wide * g_low)
        new_q = g_high_inv * high
        if new_q == q:
            break
        q = new_q
    else:
        raise ArithmeticError("Weierstrass division did not converge")
    q_wide = TruncatedPowerSeries(R, n, D, q.coeffs)
    r, _ = split(f - q_wide * g_low)
    return q, r


# --- Koszul homology ---------------------------------------------------------


@dataclass(frozen=True)
class TruncatedQuotient:
    """``W_N(k)[[u_1..u_n]] / (relations)`` with terms of degree >= D dropped."""

    ring: GaloisRing
    nvars: int
    D: int
    relations: tuple = field(default=())

    @property
    def basis(self):
        return [(m, t) for m in monomials_below(self.nvars, self.D) for t in range(self.ring.f)]

    def vector(self, s: TruncatedPowerSeries) -> list[int]:
        return [s.coefficient(m)[t] for m, t in self.basis]

    def basis_series(self, m, t) -> TruncatedPowerSeries:
        c = [0] * self.ring.f
        c[t] = 1
        return TruncatedPowerSeries(self.ring, self.nvars, self.D, {m: tuple(c)})

    def multiplication_columns(self, s: TruncatedPowerSeries) -> list[list[int]]:
        """Columns of ``x -> s x`` on the free Z/p^N-basis."""
        return [self.vector(s * self.basis_series(m, t)) for m, t in self.basis]

    def relation_columns(self) -> list[list[int]]:
        cols = []
        for rel in self.relations:
            cols.extend(self.multiplication_columns(rel))
        return cols


def _transpose(cols, nrows):
    if not cols:
        return [[] for _ in range(nrows)]
    return [[col[i] for col in cols] for i in range(nrows)]


@dataclass
class KoszulResult:
    h0_exponents: list  # cokernel of (s_1..s_n) as sum of Z/p^e, e = N means free
    h1_vanishes: bool
    inspected_N: int
    inspected_D: int
    cycles_checked: int
    witness: list | None = None


def koszul_homology(seq, Q: TruncatedQuotient, degree_cap: int | None = None, precision_cap: int | None = None):
    """H_0 and the inspected-range H_1 of the Koszul complex of ``seq`` on Q.

    H_1 is certified on the range ``(precision_cap, degree_cap)``: every
    cycle of the full truncation must become a boundary after reducing mod
    ``p^precision_cap`` and dropping degrees ``>= degree_cap``. Defaults lose
    one p-adic digit and the largest order among ``seq``.
    """
    R = Q.ring
    n = len(seq)
    N, D = R.N, Q.D
    p = R.p
    orders = [s.order() if s.order() is not None else 0 for s in seq]
    if degree_cap is None:
        degree_cap = D - max([1] + orders)
    if precision_cap is None:
        precision_cap = N - 1
    if degree_cap < 1 or precision_cap < 1:
        raise Inconclusive(f"range (N'={precision_cap}, D'={degree_cap}) too small to certify exactness")

    basis = Q.basis
    dim = len(basis)
    rel_cols = Q.relation_columns()
    mult = [Q.multiplication_columns(s) for s in seq]

    # H_0 = Q / (s_1, ..., s_n)
    h0_cols = [c for cols in mult for c in cols] + rel_cols
    h0 = smith_local(_transpose(h0_cols, dim), p, N) if h0_cols else None
    h0_exponents = h0.cokernel_exponents() if h0 else [N] * dim

    # cycles: (z_1..z_n) with sum s_i z_i in span(relations)
    d1_cols = h0_cols
    d1 = smith_local(_transpose(d1_cols, dim), p, N)
    cycles = [vec[: n * dim] for vec in d1.kernel()]

    # boundaries: d_2(e_i ^ e_j) = s_i e_j - s_j e_i, plus relations in each slot
    bnd_cols = []
    for i in range(n):
        for j in range(i + 1, n):
            for col_i, col_j in zip(mult[i], mult[j]):
                v = [0] * (n * dim)
                for r in range(dim):
                    v[j * dim + r] = col_i[r]
                    v[i * dim + r] = -col_j[r]
                bnd_cols.append(v)
    for i in range(n):
        for col in rel_cols:
            v = [0] * (n * dim)
            v[i * dim : (i + 1) * dim] = col
            bnd_cols.append(v)

    keep = [slot * dim + r for slot in range(n) for r, (m, _) in enumerate(basis) if sum(m) < degree_cap]
    mod = p**precision_cap
    restricted = [[c[i] % mod for i in keep] for c in bnd_cols]
    if restricted:
        B = smith_local(_transpose(restricted, len(keep)), p, precision_cap)
    witness = None
    for z in cycles:
        target = [z[i] % mod for i in keep]
        if not any(target):
            continue
        if not restricted or B.solve(target) is None:
            witness = z
            break
    return KoszulResult(h0_exponents, witness is None, precision_cap, degree_cap, len(cycles), witness)


def regular_local_kernel_generator(phi: TruncatedPowerSeries, k=None, n: int | None = None, seed: int = 0, samples: int = 5):
    """Check the presentation ``A = W(k)[[u_1..u_n]] / (phi)`` with ``phi(0) = p * unit``.

    Clauses: residue ring equals k; Koszul H_1 of (u_1..u_n) on A vanishes in
    the inspected range; the kernel slice of ``W(k)[[u]] -> A`` consists of
    multiples of phi (for n = 1 a generator is recovered and certified to be
    a unit multiple of phi).
    """
    R = phi.ring
    if k is not None and k != R.k:
        raise ValueError("phi lives over a different residue field")
    if n is not None and n != phi.nvars:
        raise ValueError("phi has the wrong number of variables")
    n = phi.nvars
    c0 = phi.constant_term()
    # (phi) only depends on phi up to units, so p times a unit is accepted
    if R.valuation(c0) != 1:
        raise ConstantTermNotP(f"phi(0) = {c0} is not p times a unit at precision {R.N}")
    D = phi.D
    report = Report("regular local kernel generator")
    Q = TruncatedQuotient(R, n, D, (phi,))
    us = [TruncatedPowerSeries.variable(R, n, D, i) for i in range(n)]
    kos = koszul_homology(us, Q)

    residue_ok = kos.h0_exponents == [1] * R.f
    report.add(
        "residue ring is k",
        "Pass" if residue_ok else "Fail",
        "paper",
        f"A/(u_1..u_n) = sum Z/p^e with e = {kos.h0_exponents}",
    )
    report.add(
        "Koszul H_1 vanishes",
        "Pass" if kos.h1_vanishes else "Fail",
        "paper",
        f"inspected range N'={kos.inspected_N}, D'={kos.inspected_D}, {kos.cycles_checked} cycle generators",
    )

    try:
        e = weierstrass_degree(phi)
        if e is None:
            raise Inconclusive("phi has no unit pure power of u_n")
        rng = random.Random(seed)
        round_trip = True
        Dq = D - e
        for _ in range(samples):
            q = TruncatedPowerSeries.random(R, n, Dq, rng, density=0.5)
            prod = TruncatedPowerSeries(R, n, D, q.coeffs) * phi
            q2, r2 = weierstrass_divide(prod, phi)
            # q itself is only pinned down below degree D - eN (high-degree
            # p-torsion ambiguity of the truncation), so compare products
            back = TruncatedPowerSeries(R, n, D, q2.coeffs) * phi
            round_trip &= r2.is_zero() and back == prod
        detail = f"Weierstrass degree {e}; {samples} sampled multiples of phi divide back"
        data = {}
        verdict = "Pass" if round_trip else "Fail"
        if n == 1 and round_trip:
            gen = _recover_generator(phi, e)
            if gen is None:
                verdict = "Fail"
                detail += "; no kernel generator with constant term of valuation 1"
            else:
                g, unit = gen
                detail += "; recovered generator is a unit multiple of phi"
                data = {"generator": g.to_json(), "unit": unit.to_json()}
        report.add("kernel is generated by phi", verdict, "paper", detail, **data)
    except Inconclusive as exc:
        report.add("kernel is generated by phi", "Inconclusive", "paper", str(exc))
    return report


def _recover_generator(phi: TruncatedPowerSeries, e: int):
    """Kernel of ``W(k)[u]_{<D} -> A`` by linear algebra; certify a generator."""
    R, D = phi.ring, phi.D
    basis = [((j,), t) for j in range(D) for t in range(R.f)]
    cols = []
    for (j,), t in basis:
        c = [0] * R.f
        c[t] = 1
        mono = TruncatedPowerSeries(R, 1, D, {(j,): tuple(c)})
        _, r = weierstrass_divide(mono, phi)
        cols.append([r.coefficient((i,))[s] for i in range(e) for s in range(R.f)])
    S = smith_local(_transpose(cols, e * R.f), R.p, R.N)
    best = None
    for vec in S.kernel():
        coeffs = {}
        for idx, ((j,), t) in enumerate(basis):
            if vec[idx]:
                c = list(coeffs.get((j,), R.zero))
                c[t] = vec[idx]
                coeffs[(j,)] = tuple(c)
        g = TruncatedPowerSeries(R, 1, D, coeffs)
        v = R.valuation(g.constant_term())
        if v == 1 and best is None:
            best = g
    if best is None:
        return None
    q, r = weierstrass_divide(best, phi)
    if not r.is_zero() or not R.is_unit(q.constant_term()):
        return None
    if not (TruncatedPowerSeries(R, 1, D, q.coeffs) * phi).agrees_with(best, D=D - e):
        return None
    return best, q
