"""Exact integer linear algebra: normal forms, saturated affine charts, lattice indices.

Matrices are plain lists of rows of Python ints. Nothing in here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Sequence

IntVector = tuple[int, ...]
IntMatrix = list[list[int]]


class ConsistencyError(ArithmeticError):
    """Two independent computations of the same exact quantity disagree."""


def primitive(v: Sequence[int]) -> IntVector:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: IntMatrix, ncols: int | None = None) -> IntMatrix:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M: Sequence[Sequence]) -> int:
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return 0
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, len(A)):
            if A[i][c]:
                f = A[i][c] / A[r][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def rational_inverse(M: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def hermite_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular and U*M = H. H is in row echelon form,
    pivots are positive and the entries above each pivot lie in [0, pivot).
    Zero rows of H sit at the bottom.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    H = [list(row) for row in M]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][c]
            if b == 0:
                continue
            a = H[r][c]
            g, x, y = xgcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant x*p + y*q = 1
            H[r], H[i] = ([x * s + y * t for s, t in zip(H[r], H[i])],
                          [-q * s + p * t for s, t in zip(H[r], H[i])])
            U[r], U[i] = ([x * s + y * t for s, t in zip(U[r], U[i])],
                          [-q * s + p * t for s, t in zip(U[r], U[i])])
        piv = H[r][c]
        if piv == 0:
            continue
        if piv < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
            piv = -piv
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = [s - f * t for s, t in zip(H[i], H[r])]
                U[i] = [s - f * t for s, t in zip(U[i], U[r])]
        r += 1
    return H, U


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V) with U*M*V = S diagonal, d_1 | d_2 | ..., d_i >= 0."""
    m = len(M)
    n = len(M[0]) if m else 0
    S = [list(row) for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for A in (S, V):
            for row in A:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        S[dst] = [a + f * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for A in (S, V):
            for row in A:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // S[t][t]))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // S[t][t]))
                    clean = clean and S[t][j] == 0
            if not clean:
                cands = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
                cands += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
                _, i, j = min(cands)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return S, U, V


def integer_kernel(A: IntMatrix, ncols: int) -> IntMatrix:
    """Lattice basis (as rows) of {x in Z^ncols : A x = 0}."""
    if not A:
        return identity(ncols)
    H, U = hermite_normal_form(transpose(A))
    return [U[i] for i in range(ncols) if not any(H[i])]


@dataclass(frozen=True)
class AffineLatticeChart:
    """Integer coordinates on aff(S) ∩ Z^n: x = origin + sum_i c_i * basis[i].

    The basis is the row-style HNF of the saturated lattice, so two point sets
    with the same affine direction get identical bases.
    """

    origin: IntVector
    basis: tuple[IntVector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.origin)

    def _pivots(self):
        return [next(j for j, x in enumerate(row) if x) for row in self.basis]

    def coordinates(self, x: Sequence) -> tuple | None:
        """Chart coordinates of x (exact; Fractions if x is off-lattice).

        Returns None when x is not on the affine hull.
        """
        diff = [Fraction(a) - b for a, b in zip(x, self.origin)]
        coords = []
        for i, p in enumerate(self._pivots()):
            val = diff[p] - sum(c * self.basis[l][p] for l, c in enumerate(coords))
            coords.append(val / self.basis[i][p])
        recon = self.point(coords)
        if any(Fraction(a) != b for a, b in zip(x, recon)):
            return None
        return tuple(int(c) if c.denominator == 1 else c for c in coords)

    def lattice_coordinates(self, x: Sequence[int]) -> IntVector:
        c = self.coordinates(x)
        if c is None or any(isinstance(v, Fraction) for v in c):
            raise ValueError(f"{tuple(x)} is not a lattice point of the chart")
        return c

    def point(self, coords: Sequence) -> tuple:
        out = list(self.origin)
        for c, row in zip(coords, self.basis):
            if c:
                for j, b in enumerate(row):
                    out[j] += c * b
        return tuple(out)


def saturated_chart(points: Sequence[Sequence[int]]) -> AffineLatticeChart:
    if not points:
        raise ValueError("saturated_chart needs at least one point")
    n = len(points[0])
    p0 = tuple(points[0])
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    diffs = [d for d in diffs if any(d)]
    normals = integer_kernel(diffs, n)
    if not normals:
        return AffineLatticeChart((0,) * n, tuple(tuple(r) for r in identity(n)))
    basis = integer_kernel(normals, n)
    if basis:
        H, _ = hermite_normal_form(basis)
        basis = [row for row in H if any(row)]
    return AffineLatticeChart(p0, tuple(tuple(r) for r in basis))


def lattice_index(points: Sequence[Sequence[int]]) -> int:
    """Index of the affine lattice generated by `points` in aff(points) ∩ Z^n."""
    chart = saturated_chart(points)
    if chart.rank == 0:
        return 1
    coords = [chart.lattice_coordinates(p) for p in points]
    c0 = coords[0]
    D = [[a - b for a, b in zip(c, c0)] for c in coords[1:]]
    S, _, _ = smith_normal_form(D)
    idx = 1
    for i in range(chart.rank):
        idx *= S[i][i]
    return idx


def generalized_binomial(t: int, k: int) -> int:
    """binom(t, k) = t(t-1)...(t-k+1)/k! for any integer t and k >= 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    num = 1
    for i in range(k):
        num *= t - i
    return num // factorial(k)


def binom(t: int, k: int) -> int:
    """Like generalized_binomial, but 0 for negative k (the summation convention)."""
    if k < 0:
        return 0
    return generalized_binomial(t, k)
