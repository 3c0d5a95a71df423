"""Smith normal forms over Z/p^N and over F_p[x].

Both rings are principal, so the diagonalisation by invertible row and column
operations is the only tool needed: kernels, solvability and cokernel
structure are all read off the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass


def _val(c: int, p: int, N: int) -> int:
    if c == 0:
        return N
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


@dataclass
class LocalSmith:
    """``U @ A @ V = D`` over Z/p^N with ``D[i][i] = p^exponents[i]``."""

    p: int
    N: int
    rows: int
    cols: int
    exponents: list  # one per pivot, < N
    U: list
    V: list

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def kernel(self) -> list[list[int]]:
        """Generators of ``{x : A x = 0}`` as a Z/p^N-module."""
        m = self.p**self.N
        gens = []
        for j in range(self.cols):
            if j < self.rank:
                k = self.exponents[j]
                if k == 0:
                    continue
                scale = self.p ** (self.N - k)
            else:
                scale = 1
            gens.append([self.V[i][j] * scale % m for i in range(self.cols)])
        return gens

    def solve(self, b) -> list[int] | None:
        """Some x with ``A x = b``, or None when b is outside the image."""
        m = self.p**self.N
        c = [sum(u * bi for u, bi in zip(row, b)) % m for row in self.U]
        y = [0] * self.cols
        for i, ci in enumerate(c):
            if i < self.rank:
                q = self.p ** self.exponents[i]
                if ci % q:
                    return None
                y[i] = ci // q
            elif ci:
                return None
        return [sum(self.V[i][j] * y[j] for j in range(self.cols)) % m for i in range(self.cols)]

    def cokernel_exponents(self) -> list[int]:
        """Cokernel as ``sum Z/p^e``; free-at-precision summands report N."""
        out = [e for e in self.exponents if e > 0]
        out += [self.N] * (self.rows - self.rank)
        return sorted(out)


def smith_local(A, p: int, N: int) -> LocalSmith:
    m = p**N
    rows = len(A)
    cols = len(A[0]) if rows else 0
    S = [[c % m for c in row] for row in A]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]
    exponents = []
    for s in range(min(rows, cols)):
        best, pos = N, None
        for i in range(s, rows):
            row = S[i]
            for j in range(s, cols):
                c = row[j]
                if c:
                    v = _val(c, p, N)
                    if v < best:
                        best, pos = v, (i, j)
                        if v == 0:
                            break
            if best == 0:
                break
        if pos is None:
            break
        i, j = pos
        if i != s:
            S[s], S[i] = S[i], S[s]
            U[s], U[i] = U[i], U[s]
        if j != s:
            for row in S:
                row[s], row[j] = row[j], row[s]
            for row in V:
                row[s], row[j] = row[j], row[s]
        unit = S[s][s] // p**best
        inv = pow(unit, -1, m)
        S[s] = [c * inv % m for c in S[s]]
        U[s] = [c * inv % m for c in U[s]]
        piv = p**best
        for i in range(s + 1, rows):
            c = S[i][s]
            if c:
                q = c // piv
                Si, Ss = S[i], S[s]
                for j in range(s, cols):
                    Si[j] = (Si[j] - q * Ss[j]) % m
                Ui, Us = U[i], U[s]
                for j in range(rows):
                    Ui[j] = (Ui[j] - q * Us[j]) % m
        for j in range(s + 1, cols):
            c = S[s][j]
            if c:
                q = c // piv
                for row in S:
                    row[j] = (row[j] - q * row[s]) % m
                for row in V:
                    row[j] = (row[j] - q * row[s]) % m
        exponents.append(best)
    return LocalSmith(p, N, rows, cols, exponents, U, V)


def matvec(A, x, modulus: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) % modulus for row in A]


# --- F_p[x] -----------------------------------------------------------------


def pstrip(a) -> tuple:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return tuple(a[:n])


def padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return pstrip(out)


def pneg(a, p):
    return tuple(-c % p for c in a)


def psub(a, b, p):
    return padd(a, pneg(b, p), p)


def pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return pstrip([c % p for c in out])


def pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] % p * inv % p
        if c:
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return pstrip(q), pstrip([c % p for c in a[: max(len(b) - 1, 0)]])


def pmonic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return tuple(c * inv % p for c in a)


def pgcd(a, b, p):
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    return pmonic(a, p)


def smith_poly_diagonal(A, p: int) -> list[tuple]:
    """Invariant factors (monic, ``d_1 | d_2 | ...``) of a matrix over F_p[x].

    Units are kept as ``(1,)``; zero diagonal entries are omitted, so the
    length of the result is the rank.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    S = [[pstrip(tuple(c)) for c in row] for row in A]
    diag = []
    s = 0
    while s < min(rows, cols):
        pos, best = None, None
        for i in range(s, rows):
            for j in range(s, cols):
                c = S[i][j]
                if c and (best is None or len(c) < best):
                    best, pos = len(c), (i, j)
        if pos is None:
            break
        i, j = pos
        S[s], S[i] = S[i], S[s]
        for row in S:
            row[s], row[j] = row[j], row[s]
        clean = True
        piv = S[s][s]
        for i in range(s + 1, rows):
            if S[i][s]:
                q, r = pdivmod(S[i][s], piv, p)
                S[i] = [psub(S[i][j], pmul(q, S[s][j], p), p) for j in range(cols)]
                clean = clean and not r
        for j in range(s + 1, cols):
            if S[s][j]:
                q, r = pdivmod(S[s][j], piv, p)
                for row in S:
                    row[j] = psub(row[j], pmul(q, row[s], p), p)
                clean = clean and not r
        if not clean:
            continue  # a smaller-degree remainder appeared; pivot again
        diag.append(pmonic(piv, p))
        s += 1
    # Enforce the divisibility chain via gcd/lcm swaps.
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a, b = diag[i], diag[j]
                if pdivmod(b, a, p)[1]:
                    g = pgcd(a, b, p)
                    lcm = pdivmod(pmul(a, b, p), g, p)[0]
                    diag[i], diag[j] = g, pmonic(lcm, p)
                    changed = True
    return diag
