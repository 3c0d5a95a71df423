"""Unique lifting of maps out of perfect algebras along nilpotent thickenings.

Given ``sigma: A -> S`` with A perfect and a surjection ``D -> S`` whose kernel
I satisfies ``I^r = 0``, the lift of a is ``phi^n(b_n)`` for any preimage
``b_n`` of ``sigma(phi^-n(a))``. Changing ``b_n`` by an element of I moves
``phi^n(b_n)`` by an element of ``I^(p^n)``, so the value is independent of
all choices once ``p^n >= r``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from wittkit.errors import StabilizationFailure
from wittkit.perfect import FiniteFieldAlg


@dataclass(frozen=True)
class TruncatedNilAlg:
    """``k[eps]/(eps^r)`` with the surjection ``eps -> 0`` onto k."""

    k: FiniteFieldAlg
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("nilpotency order must be positive")

    @property
    def p(self) -> int:
        return self.k.p

    @property
    def zero(self):
        return (self.k.zero,) * self.r

    @property
    def one(self):
        return (self.k.one,) + (self.k.zero,) * (self.r - 1)

    def from_int(self, n: int):
        return (self.k.from_int(n),) + (self.k.zero,) * (self.r - 1)

    def add(self, a, b):
        return tuple(self.k.add(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        k = self.k
        out = [k.zero] * self.r
        for i, x in enumerate(a):
            if k.is_zero(x):
                continue
            for j in range(self.r - i):
                out[i + j] = k.add(out[i + j], k.mul(x, b[j]))
        return tuple(out)

    def pow(self, a, e: int):
        out, base = self.one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def frobenius(self, a):
        return self.pow(a, self.p)

    def project(self, a):
        return a[0]

    def random_preimage(self, y, rng: random.Random):
        return (y,) + tuple(self.k.random(rng) for _ in range(self.r - 1))

    def evaluate_poly(self, coeffs, x):
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.from_int(c))
        return acc


def stopping_index(p: int, r: int) -> int:
    """Smallest n with ``p^n >= r``."""
    n = 0
    while p**n < r:
        n += 1
    return n


@dataclass(frozen=True)
class LiftedMap:
    source: FiniteFieldAlg
    target: TruncatedNilAlg
    generator_images: tuple
    n_star: int

    def __call__(self, a):
        """Image of ``a = sum c_j gen^j``."""
        (g,) = self.generator_images
        D = self.target
        acc, power = D.zero, D.one
        for c in a:
            acc = D.add(acc, D.mul(D.from_int(c), power))
            power = D.mul(power, g)
        return acc


def unique_lift(
    A: FiniteFieldAlg,
    sigma: Callable,
    Dbar: TruncatedNilAlg,
    r: int | None = None,
    rng: random.Random | None = None,
) -> LiftedMap:
    """The unique ring map ``A -> Dbar`` lifting ``sigma`` through ``Dbar.project``."""
    rng = rng or random.Random(0)
    r = Dbar.r if r is None else r
    n_star = stopping_index(A.p, r)
    images = []
    for a in A.generators():
        values = []
        for n in (n_star, n_star + 1):
            b = Dbar.random_preimage(sigma(A.frobenius_power(a, -n)), rng)
            values.append(Dbar.pow(b, A.p**n))
        if values[0] != values[1]:
            raise StabilizationFailure(f"iterates at n={n_star} and n={n_star + 1} differ for generator {a}")
        images.append(values[0])
    lifted = LiftedMap(A, Dbar, tuple(images), n_star)
    for a, img in zip(A.generators(), images):
        if Dbar.project(img) != sigma(a):
            raise StabilizationFailure(f"lift of {a} does not reduce to sigma({a})")
    for rel in A.relations():
        if Dbar.evaluate_poly(rel, images[0]) != Dbar.zero:
            raise StabilizationFailure(f"image of the generator violates the relation {rel}")
    return lifted
