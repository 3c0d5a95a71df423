"""Truncated p-typical Witt vectors over a perfect F_p-algebra.

Ring operations evaluate the universal sum and product polynomials S_n, P_n,
obtained from the ghost recursion

    S_n = (w_n(x) + w_n(y) - sum_{i<n} p^i S_i^(p^(n-i))) / p^n

over the integers (same for P_n with w_n(x) * w_n(y)). The division is
checked to be exact; a remainder is a bug and aborts.

Polynomials use the interleaved variable order ``x_0, y_0, x_1, y_1, ...`` and
are stored as ``{exponent tuple: int}`` with tuples of length ``2(n+1)``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from sympy import ZZ
from sympy.polys.rings import ring

from wittkit.errors import InexactDivision, NotAUnit, PrecisionMismatch, ResourceLimit
from wittkit.padic import PAdicContext, PAdicInt, teichmuller_lift_prime_field
from wittkit.perfect import FiniteFieldAlg, PerfectAlgebra

MAX_LENGTH = 8
CACHE_FORMAT = "wittkit-witt-polynomials"
CACHE_VERSION = 1

_cache: dict[tuple[int, int], tuple[dict, dict]] = {}
_cache_lock = threading.Lock()


def _ghost_polynomials(p: int, N: int):
    names = ",".join(f"x{i},y{i}" for i in range(N))
    R, *gens = ring(names, ZZ)
    xs, ys = gens[0::2], gens[1::2]
    sums, prods = [], []
    for n in range(N):
        wx = sum((p**i * xs[i] ** (p ** (n - i)) for i in range(n + 1)), R.zero)
        wy = sum((p**i * ys[i] ** (p ** (n - i)) for i in range(n + 1)), R.zero)
        for target, acc in ((wx + wy, sums), (wx * wy, prods)):
            rest = target - sum((p**i * acc[i] ** (p ** (n - i)) for i in range(n)), R.zero)
            q = rest.quo_ground(p**n)
            if q * p**n != rest:
                raise InexactDivision(f"ghost recursion not integral at p={p}, n={n}")
            acc.append(q)
    width = lambda n: 2 * (n + 1)  # noqa: E731
    return [
        (
            {m[: width(n)]: int(c) for m, c in sums[n].items()},
            {m[: width(n)]: int(c) for m, c in prods[n].items()},
        )
        for n in range(N)
    ]


@dataclass(frozen=True)
class WittPolynomialCache:
    """Read-only view of the memoized S_n, P_n for ``n < N``."""

    p: int
    N: int

    def sum_poly(self, n: int) -> dict:
        return _cache[(self.p, n)][0]

    def product_poly(self, n: int) -> dict:
        return _cache[(self.p, n)][1]


def build_witt_cache(p: int, N: int, max_length: int = MAX_LENGTH) -> WittPolynomialCache:
    """Fill the cache for all ``n < N`` (compute-if-absent, race free)."""
    PAdicContext(p, 1)
    if N < 1:
        raise ValueError("Witt length must be at least 1")
    if N > max_length:
        raise ResourceLimit(f"Witt length {N} exceeds the limit {max_length}")
    if all((p, n) in _cache for n in range(N)):
        return WittPolynomialCache(p, N)
    with _cache_lock:
        if not all((p, n) in _cache for n in range(N)):
            for n, polys in enumerate(_ghost_polynomials(p, N)):
                _cache.setdefault((p, n), polys)
    return WittPolynomialCache(p, N)


def _poly_terms(poly: dict):
    return [[list(m), str(c)] for m, c in sorted(poly.items())]


def dump_cache(p: int, N: int) -> str:
    """Serialize S_n, P_n for n < N as deterministic JSON text."""
    cache = build_witt_cache(p, N)
    doc = {
        "format": CACHE_FORMAT,
        "version": CACHE_VERSION,
        "p": p,
        "polynomials": [
            {"n": n, "sum": _poly_terms(cache.sum_poly(n)), "product": _poly_terms(cache.product_poly(n))}
            for n in range(N)
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def save_cache(path, p: int, N: int) -> None:
    Path(path).write_text(dump_cache(p, N))


def load_cache(path) -> WittPolynomialCache:
    """Install polynomials from a file written by :func:`save_cache`.

    Entries already present must agree with the file; a mismatch raises.
    """
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != CACHE_FORMAT or doc.get("version") != CACHE_VERSION:
        raise ValueError(f"unsupported cache file {path}")
    p = int(doc["p"])
    loaded = {}
    for entry in doc["polynomials"]:
        n = int(entry["n"])
        s = {tuple(m): int(c) for m, c in entry["sum"]}
        pr = {tuple(m): int(c) for m, c in entry["product"]}
        loaded[(p, n)] = (s, pr)
    with _cache_lock:
        for key, val in loaded.items():
            if key in _cache and _cache[key] != val:
                raise ValueError(f"cache file disagrees with computed polynomials at {key}")
            _cache.setdefault(key, val)
    return WittPolynomialCache(p, len(loaded))


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def _evaluate(poly: dict, values, k: PerfectAlgebra):
    """Evaluate an integer polynomial at base-algebra values."""
    p = k.p
    nonzero = [not k.is_zero(v) for v in values]
    powers: dict[tuple[int, int], object] = {}
    acc = k.zero
    for mono, coeff in poly.items():
        c = coeff % p
        if not c:
            continue
        term = None
        for var, e in enumerate(mono):
            if not e:
                continue
            if not nonzero[var]:
                term = k.zero
                break
            key = (var, e)
            if key not in powers:
                powers[key] = k.pow(values[var], e)
            term = powers[key] if term is None else k.mul(term, powers[key])
        if term is None:
            term = k.one
        if k.is_zero(term):
            continue
        if c != 1:
            term = k.mul(term, k.from_int(c))
        acc = k.add(acc, term)
    return acc


class WittVector:
    """An element of W_N(k) given by its Witt digits ``(a_0, ..., a_{N-1})``."""

    __slots__ = ("base", "digits")

    def __init__(self, base: PerfectAlgebra, digits):
        self.base = base
        self.digits = tuple(digits)
        if not self.digits:
            raise ValueError("Witt vectors need at least one digit")

    @property
    def length(self) -> int:
        return len(self.digits)

    @property
    def p(self) -> int:
        return self.base.p

    def _check(self, other: WittVector):
        if not isinstance(other, WittVector):
            raise TypeError(f"expected WittVector, got {type(other).__name__}")
        if other.base != self.base or other.length != self.length:
            raise PrecisionMismatch(
                f"W_{self.length}({self.base}) vs W_{other.length}({other.base})"
            )

    def _apply(self, other: WittVector, which: int) -> WittVector:
        self._check(other)
        N = self.length
        cache = build_witt_cache(self.p, N)
        values = [v for pair in zip(self.digits, other.digits) for v in pair]
        out = []
        for n in range(N):
            poly = cache.sum_poly(n) if which == 0 else cache.product_poly(n)
            out.append(_evaluate(poly, values[: 2 * (n + 1)], self.base))
        return WittVector(self.base, out)

    def __add__(self, other):
        if isinstance(other, int):
            other = integer_witt(other, self.base, self.length)
        return witt_add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            other = integer_witt(other, self.base, self.length)
        return witt_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, other):
        if isinstance(other, int):
            other = integer_witt(other, self.base, self.length)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, e: int):
        result = witt_one(self.base, self.length)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.base == other.base and self.digits == other.digits

    def __hash__(self):
        return hash((self.base, self.digits))

    def __repr__(self):
        return f"WittVector({self.base!r}, {self.digits})"

    def is_zero(self) -> bool:
        return all(self.base.is_zero(d) for d in self.digits)

    def is_unit(self) -> bool:
        return self.base.is_unit(self.digits[0])

    def truncate(self, n: int) -> WittVector:
        if n > self.length:
            raise PrecisionMismatch(f"cannot extend length {self.length} to {n}")
        return WittVector(self.base, self.digits[:n])

    def map_digits(self, f, base: PerfectAlgebra) -> WittVector:
        """Functoriality: apply a ring map ``f`` of bases digitwise."""
        return WittVector(base, [f(d) for d in self.digits])


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    return x._apply(y, 0)


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    return x._apply(y, 1)


def witt_zero(k: PerfectAlgebra, N: int) -> WittVector:
    return WittVector(k, [k.zero] * N)


def witt_one(k: PerfectAlgebra, N: int) -> WittVector:
    return teichmuller(k.one, k, N)


def teichmuller(a, k: PerfectAlgebra, N: int) -> WittVector:
    return WittVector(k, [a] + [k.zero] * (N - 1))


def integer_witt(n: int, k: PerfectAlgebra, N: int) -> WittVector:
    """Image of the integer ``n`` under Z -> W_N(F_p) -> W_N(k)."""
    ctx = PAdicContext(k.p, N)
    digits = _padic_digits(ctx(n))
    return WittVector(k, [k.from_int(d) for d in digits])


def witt_neg(x: WittVector) -> WittVector:
    k = x.base
    if x.p != 2:
        return WittVector(k, [k.neg(d) for d in x.digits])
    return witt_mul(x, integer_witt(-1, k, x.length))


def witt_frobenius(x: WittVector) -> WittVector:
    """Witt Frobenius; over a char-p base it is the digitwise p-th power."""
    return WittVector(x.base, [x.base.frobenius(d) for d in x.digits])


def witt_verschiebung(x: WittVector) -> WittVector:
    return WittVector(x.base, [x.base.zero] + list(x.digits[:-1]))


def witt_divide_by_p(z: WittVector) -> WittVector:
    """The unique w of length N-1 with ``p * w = z``, over a perfect base.

    Uses ``p = V F``: digit 0 of z must vanish and ``w_i = z_{i+1}^(1/p)``.
    """
    k = z.base
    if not k.is_zero(z.digits[0]):
        raise NotAUnit("digit 0 is nonzero, so the vector is not divisible by p")
    if z.length < 2:
        raise PrecisionMismatch("division by p needs length >= 2")
    return WittVector(k, [k.frobenius_inverse(d) for d in z.digits[1:]])


def witt_delta(x: WittVector) -> WittVector:
    """``delta(x) = (F(x) - x^p) / p`` at length N-1."""
    if x.length < 2:
        raise PrecisionMismatch("delta needs Witt length >= 2")
    diff = witt_frobenius(x) - x**x.p
    if not x.base.is_zero(diff.digits[0]):
        raise InexactDivision("F(x) - x^p has nonzero digit 0")
    return witt_divide_by_p(diff)


def _padic_digits(a: PAdicInt) -> list[int]:
    """Witt digits of a in W_N(F_p): greedy Teichmuller expansion."""
    ctx = a.ctx
    r = a.residue
    out = []
    for i in range(ctx.N):
        sub = PAdicContext(ctx.p, ctx.N - i)
        d = r % ctx.p
        out.append(d)
        r = (r - teichmuller_lift_prime_field(d, sub).residue) % sub.modulus // ctx.p
    return out


def _require_prime_field(k):
    if not (isinstance(k, FiniteFieldAlg) and k.degree == 1):
        raise TypeError(f"base must be a prime field, got {k!r}")


def witt_to_padic(x: WittVector) -> PAdicInt:
    """``(a_0, ..., a_{N-1}) -> sum p^i omega(a_i) mod p^N`` over F_p."""
    _require_prime_field(x.base)
    ctx = PAdicContext(x.p, x.length)
    total = 0
    for i, d in enumerate(x.digits):
        total += x.p**i * teichmuller_lift_prime_field(d[0], ctx).residue
    return ctx(total)


def padic_to_witt(a: PAdicInt, k: FiniteFieldAlg | None = None) -> WittVector:
    from wittkit.perfect import PrimeField

    k = k or PrimeField(a.ctx.p)
    _require_prime_field(k)
    if k.p != a.ctx.p:
        raise PrecisionMismatch("prime mismatch")
    return WittVector(k, [k.from_int(d) for d in _padic_digits(a)])
