"""Exact integer linear algebra on small dense matrices.

Matrices are lists of rows of Python ints (or Fractions where noted). All
transforms are exact; nothing here touches floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = list[list[int]]


class LatticeError(ValueError):
    pass


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy_matrix(A) -> list[list]:
    return [list(row) for row in A]


def transpose(A) -> list[list]:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def matmul(A, B) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, x) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def vecmat(x, A) -> list:
    n = len(A[0]) if A else 0
    out = [0] * n
    for xi, row in zip(x, A):
        if xi:
            for j, a in enumerate(row):
                out[j] += xi * a
    return out


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


# --- determinants and rational elimination -------------------------------------


def det(A) -> int | Fraction:
    """Determinant of a square matrix; fraction-free Bareiss for integer input."""
    n = len(A)
    if n == 0:
        return 1
    if all(isinstance(v, int) for row in A for v in row):
        return _det_bareiss(A)
    M = [[Fraction(v) for v in row] for row in A]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        piv = M[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = M[r][c] / piv
            if f:
                rr, rc = M[r], M[c]
                for k in range(c, n):
                    rr[k] -= f * rc[k]
    return sign * result


def _det_bareiss(A) -> int:
    n = len(A)
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        mkk = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * mkk - mik * rowk[j]) // prev
        prev = mkk
    return sign * M[n - 1][n - 1]


def row_echelon(A) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and the pivot columns."""
    M, pivots = _integer_echelon(A)
    return [[Fraction(v, row[c]) for v in row] for row, c in zip(M, pivots)], pivots


def _integer_row(row) -> list[int]:
    if all(type(v) is int for v in row):
        return list(row)
    fr = [Fraction(v) for v in row]
    m = 1
    for v in fr:
        m = math.lcm(m, v.denominator)
    return [int(v * m) for v in fr]


def _integer_echelon(A) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss-Jordan elimination.

    Rows are scaled to integers (the reduced echelon form only depends on
    the row space) and kept primitive; each pivot row is zero in every
    other pivot column.
    """
    M = [_integer_row(row) for row in A]
    rows = len(M)
    cols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        prow = M[r]
        piv = prow[c]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                new = [a * piv - f * b for a, b in zip(M[i], prow)]
                g = 0
                for v in new:
                    if v:
                        g = math.gcd(g, v)
                        if g == 1:
                            break
                if g > 1:
                    new = [v // g for v in new]
                M[i] = new
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(A) -> int:
    if not A:
        return 0
    return len(row_echelon(A)[1])


def solve_left(B, X) -> list[list[Fraction]] | None:
    """Solve C @ B = X for C over the rationals (rows of X in the row space of B).

    B must have linearly independent rows. Returns None if some row of X
    is not in the row space.
    """
    k = len(B)
    if k == 0:
        if all(all(v == 0 for v in row) for row in X):
            return [[] for _ in X]
        return None
    _, pivots = row_echelon(B)
    if len(pivots) != k:
        raise LatticeError("rows of B are linearly dependent")
    sub = [[Fraction(B[i][c]) for c in pivots] for i in range(k)]
    inv = inverse(sub)
    out = []
    for row in X:
        coeffs = [sum(Fraction(row[c]) * inv[j][i] for j, c in enumerate(pivots)) for i in range(k)]
        if vecmat(coeffs, B) != [Fraction(v) for v in row]:
            return None
        out.append(coeffs)
    return out


def inverse(A) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = row_echelon(M)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise LatticeError("matrix is singular")
    return [row[n:] for row in R]


def integer_inverse(A) -> IntMatrix:
    inv = inverse(A)
    if any(v.denominator != 1 for row in inv for v in row):
        raise LatticeError("matrix is not unimodular")
    return [[int(v) for v in row] for row in inv]


def nullspace(A, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over the rationals."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, pivots = row_echelon(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -R[r][f]
        basis.append(x)
    return basis


def primitive(v) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = math.lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise LatticeError("zero vector has no primitive representative")
    return [x // g for x in ints]


# --- normal forms ---------------------------------------------------------------


def hermite_normal_form(A) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns (H, U) with U @ A == H, U unimodular.

    H is in row echelon form with positive pivots, entries above each pivot
    reduced into [0, pivot), and zero rows at the bottom.
    """
    H = [list(map(int, row)) for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for j in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][j]
            if b == 0:
                continue
            a = H[r][j]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [x * p + y * q for p, q in zip(Hr, Hi)]
            H[i] = [-bg * p + ag * q for p, q in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [x * p + y * q for p, q in zip(Ur, Ui)]
            U[i] = [-bg * p + ag * q for p, q in zip(Ur, Ui)]
        piv = H[r][j]
        if piv == 0:
            continue
        if piv < 0:
            H[r] = [-v for v in H[r]]
            U[r] = [-v for v in U[r]]
            piv = -piv
        for i in range(r):
            q = H[i][j] // piv
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf_basis(generators, ambient: int) -> IntMatrix:
    """Canonical (HNF) basis of the lattice generated by integer vectors."""
    if not generators:
        return []
    H, _ = hermite_normal_form(generators)
    return [row for row in H if any(row)]


def smith_normal_form(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: (S, U, V) with U @ A @ V == S diagonal, d_1 | d_2 | ...

    Diagonal entries are nonnegative; U and V are unimodular.
    """
    S = [list(map(int, row)) for row in A]
    m = len(S)
    n = len(S[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in S:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = S[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                return S, U, V
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // piv))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // piv))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            U[t] = [-v for v in U[t]]
    return S, U, V


def elementary_divisors(A) -> list[int]:
    S, _, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


# --- sublattices ----------------------------------------------------------------


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^ambient spanned by the rows of ``basis``."""

    ambient: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, generators, ambient: int) -> "Sublattice":
        gens = [list(map(int, g)) for g in generators]
        for g in gens:
            if len(g) != ambient:
                raise LatticeError("generator length does not match ambient rank")
        return cls(ambient, tuple(tuple(r) for r in hnf_basis(gens, ambient)))

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, tuple(tuple(r) for r in identity(n)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        if not self.basis:
            return all(x == 0 for x in v)
        c = solve_left(self.basis, [list(v)])
        return c is not None and all(x.denominator == 1 for x in c[0])

    def rows(self) -> IntMatrix:
        return [list(r) for r in self.basis]


def saturate(L: Sublattice) -> Sublattice:
    """Lattice points of Z^ambient lying in the rational span of L."""
    if L.rank == 0:
        return L
    S, U, V = smith_normal_form(L.rows())
    k = sum(1 for i in range(min(len(S), L.ambient)) if S[i][i])
    Vinv = integer_inverse(V)
    return Sublattice.from_generators(Vinv[:k], L.ambient)


def is_saturated(L: Sublattice) -> bool:
    return all(e == 1 for e in elementary_divisors(L.rows())) if L.rank else True


@dataclass(frozen=True)
class LatticeProjection:
    """Surjection Z^ambient -> Z^rank given by ``matrix`` (rank x ambient)."""

    ambient: int
    matrix: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, x) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self.matrix)

    def image_of_basis(self) -> list[tuple[int, ...]]:
        return [tuple(row[j] for row in self.matrix) for j in range(self.ambient)]


def quotient_projection(K: Sublattice) -> LatticeProjection:
    """Projection of Z^m onto Z^(m - rank K) whose kernel is exactly K."""
    m = K.ambient
    if K.rank == 0:
        return LatticeProjection(m, tuple(tuple(r) for r in identity(m)))
    S, U, V = smith_normal_form(K.rows())
    k = K.rank
    if any(S[i][i] != 1 for i in range(k)):
        raise LatticeError("sublattice is not saturated; saturate it before taking the quotient")
    cols = [[V[i][j] for i in range(m)] for j in range(k, m)]
    return LatticeProjection(m, tuple(tuple(c) for c in cols))


def lattice_index(L1: Sublattice, L2: Sublattice) -> int:
    """Index [L1 : L2] for L2 contained in L1 with the same rational span."""
    if L1.ambient != L2.ambient:
        raise LatticeError("ambient ranks differ")
    if L1.rank != L2.rank:
        raise LatticeError("rational spans differ")
    if L1.rank == 0:
        return 1
    C = solve_left(L1.rows(), L2.rows())
    if C is None:
        raise LatticeError("rational spans differ")
    if any(v.denominator != 1 for row in C for v in row):
        raise LatticeError("second lattice is not contained in the first")
    return abs(int(det(C)))


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    if g == 0:
        raise LatticeError("zero vector")
    return g == 1


def matrix_to_json(A) -> str:
    return json.dumps([[str(v) for v in row] for row in A])


def matrix_from_json(text: str) -> IntMatrix:
    return [[int(v) for v in row] for row in json.loads(text)]
