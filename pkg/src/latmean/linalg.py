"""Exact integer and rational matrix routines.

Everything here runs on plain Python ints / Fractions so the algebraic
identities downstream (Hecke degrees, Smith decompositions, echelon
densities, lattice indices) are exact.  Matrices are small (dimensions
at desk scale), so clarity beats asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import DegeneracyError

Matrix = list  # list of lists, int or Fraction entries


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n = len(B)
    return [[sum(a[k] * B[k][j] for k in range(n)) for j in range(len(B[0]))] for a in A]


def mat_transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def hnf(rows) -> Matrix:
    """Row Hermite normal form of an integer matrix.

    Returns the nonzero rows: pivots positive, entries above each pivot
    reduced into [0, pivot).  Row span is preserved, so the result is a
    canonical basis of the lattice generated by the input rows.
    """
    A = [[int(x) for x in r] for r in rows]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            while A[i][c]:
                q = A[r][c] // A[i][c]
                A[r] = [x - q * y for x, y in zip(A[r], A[i])]
                A[r], A[i] = A[i], A[r]
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return A[:r]


def hnf_lattice_index(rows, n: int) -> int:
    """Index [Z^n : L] of the lattice L spanned by the given integer rows.

    Raises DegeneracyError when the rows do not span a finite-index
    sublattice of Z^n.
    """
    H = hnf(rows)
    if len(H) < n:
        raise DegeneracyError("rows do not span a full-rank lattice")
    idx = 1
    for i in range(n):
        piv = next((x for x in H[i] if x), 0)
        idx *= abs(piv)
    return idx


def column_hnf(rows) -> Matrix:
    """Canonical form under right multiplication by unimodular matrices."""
    return mat_transpose(hnf(mat_transpose([list(r) for r in rows])))


def det_bareiss(A: Matrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    n = len(A)
    M = [[int(x) for x in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k]), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def rank_mod_p(A, p: int) -> int:
    """Rank of an integer matrix over the field with p elements."""
    M = [[x % p for x in row] for row in A]
    if not M:
        return 0
    m, n = len(M), len(M[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] % p), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        r += 1
        if r == m:
            break
    return r


def snf_with_transforms(A) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with unimodular witnesses: S = U * A * V.

    S is diagonal with s_1 | s_2 | ... >= 0; U, V are integer matrices of
    determinant +-1.
    """
    S = [[int(x) for x in row] for row in A]
    m = len(S)
    n = len(S[0]) if S else 0
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i -= q * row_j
        S[i] = [a - q * b for a, b in zip(S[i], S[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def add_col(i, j, q):  # col_i -= q * col_j
        for row in S:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    t = 0
    while t < min(m, n):
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(S[i][j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        clean = False
        while not clean:
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, q)
                    if S[i][t]:  # remainder became the smaller pivot
                        swap_rows(t, i)
                        clean = False
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, q)
                    if S[t][j]:
                        swap_cols(t, j)
                        clean = False
        # enforce divisibility of the trailing block by the pivot
        stray = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if S[i][j] % S[t][t]:
                    stray = i
                    break
            if stray is not None:
                break
        if stray is not None:
            add_row(t, stray, -1)
            continue
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return S, U, V


def invert_unimodular(U) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(U)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(U)]
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i][c])
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    out = [[x for x in row[n:]] for row in M]
    res = [[int(x) for x in row] for row in out]
    if any(res[i][j] != out[i][j] for i in range(n) for j in range(n)):
        raise DegeneracyError("matrix is not unimodular")
    return res


def rref(rows) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return [], []
    m, n = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M[:r], pivots


def rank_rational(rows) -> int:
    return len(rref(rows)[1])


def maximal_minor_indices(m: int, n: int):
    return combinations(range(n), m)


def det_fraction(A) -> Fraction:
    """Exact determinant of a square matrix with Fraction entries."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det
