"""Local and global heights of vectors and matrices over the base field.

Conventions: at a finite place the height of a vector is the max of the
local absolute values (an exact rational); at a real place it is the
Euclidean length; at a complex place it is the *squared* Euclidean length.
All volume constants downstream assume the squared-modulus convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import ConfigurationError, DegeneracyError, DomainError
from .linalg import hnf
from .numberfield import (
    FieldElement,
    NumberFieldSpec,
    PrimeIdealData,
    rational_field,
    valuation,
)

_RANK_TOL = 1e-12


@dataclass(frozen=True)
class MatrixOverField:
    """An m x n matrix of field elements, m <= n, with exact row rank."""

    field: NumberFieldSpec
    rows: tuple[tuple[FieldElement, ...], ...]

    @classmethod
    def build(cls, field: NumberFieldSpec, entries) -> "MatrixOverField":
        rows = tuple(
            tuple(e if isinstance(e, FieldElement) else field.element(
                *([e] + [0] * (field.degree - 1)))
                for e in row)
            for row in entries)
        return cls(field, rows)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def rank(self) -> int:
        work = [list(r) for r in self.rows]
        rank = 0
        cols = self.n
        for c in range(cols):
            piv = next((i for i in range(rank, len(work)) if work[i][c]), None)
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            inv = work[rank][c].inverse()
            work[rank] = [x * inv for x in work[rank]]
            for i in range(len(work)):
                if i != rank and work[i][c]:
                    f = work[i][c]
                    work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
            rank += 1
            if rank == len(work):
                break
        return rank

    def maximal_minors(self) -> list[FieldElement]:
        """All m x m minors, in lexicographic column order."""
        out = []
        for cols in combinations(range(self.n), self.m):
            sub = [[self.rows[i][j] for j in cols] for i in range(self.m)]
            out.append(_det_field(self.field, sub))
        return out

    def scaled(self, c) -> "MatrixOverField":
        return MatrixOverField(
            self.field, tuple(tuple(x * c for x in row) for row in self.rows))


def _det_field(field: NumberFieldSpec, M) -> FieldElement:
    n = len(M)
    if n == 1:
        return M[0][0]
    det = field.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det_field(field, minor)
        det = det + term if j % 2 == 0 else det - term
    return det


@dataclass(frozen=True)
class ArchMatrix:
    """Per infinite place, the embedded m x n matrix (real or complex)."""

    field: NumberFieldSpec
    mats: tuple[np.ndarray, ...]

    @property
    def m(self) -> int:
        return self.mats[0].shape[0]

    @property
    def n(self) -> int:
        return self.mats[0].shape[1]


def arch_components(X: MatrixOverField, twist=None) -> ArchMatrix:
    """Embed a matrix over the field at every infinite place; the optional
    twist right-multiplies the component at each place."""
    field = X.field
    emb = field.embedding_matrix()  # degree x degree complex
    mats = []
    # rows of emb: r1 real embeddings, then conjugate pairs (adjacent)
    idx = list(range(field.r1)) + [field.r1 + 2 * j for j in range(field.r2)]
    for k, row_idx in enumerate(idx):
        sigma = emb[row_idx]
        M = np.array([[complex(sum(sigma[t] * complex(c)
                                   for t, c in enumerate(e.coords)))
                       for e in row] for row in X.rows])
        if k < field.r1:
            M = M.real.astype(float)
        if twist is not None:
            M = M @ twist.mats[k]
        mats.append(M)
    return ArchMatrix(field, tuple(mats))


def local_height(xs, place, field: NumberFieldSpec | None = None):
    """Height of a vector at one place.

    `place` is a PrimeIdealData (returns an exact rational), a rational
    prime together with field Q, or one of "real" / "complex" for vectors
    of floats / complex numbers.
    """
    if isinstance(place, PrimeIdealData):
        vals = []
        for x in xs:
            if not isinstance(x, FieldElement):
                f = field or rational_field()
                x = f.element(*([x] + [0] * (f.degree - 1)))
            if x:
                vals.append(valuation(x, place))
        if not vals:
            raise DomainError("finite local height of the zero vector")
        return Fraction(place.residue_norm) ** (-min(vals))
    if isinstance(place, int):
        f = field or rational_field()
        prime = PrimeIdealData(place, f.element(place), place, "split")
        return local_height(xs, prime, f)
    if place == "real":
        return math.sqrt(sum(float(x) ** 2 for x in xs))
    if place == "complex":
        return float(sum(abs(complex(x)) ** 2 for x in xs))
    raise ConfigurationError(f"unknown place {place!r}")


def arch_matrix_height(X: ArchMatrix) -> tuple[float, bool]:
    """Product over infinite places of the place heights.

    The place height is sqrt(det(M Mbar^T)) at a real place and
    det(M Mbar^T) at a complex one (squared-modulus convention).  Returns
    (0.0, True) when some component is rank deficient.
    """
    total = 1.0
    degenerate = False
    for k, M in enumerate(X.mats):
        g = M @ M.conj().T
        d = abs(np.linalg.det(g).real) if np.iscomplexobj(g) else np.linalg.det(g)
        scale = max(np.abs(M).max() ** (2 * M.shape[0]), 1e-300)
        if d <= _RANK_TOL * scale:
            degenerate = True
            d = 0.0
        total *= d if k >= X.field.r1 else math.sqrt(max(d, 0.0))
    return (0.0, True) if degenerate else (total, False)


def arch_matrix_height_wedge(X: ArchMatrix) -> float:
    """Same height through the wedge coordinates (sum of squared minors)."""
    total = 1.0
    m = X.m
    for k, M in enumerate(X.mats):
        s = 0.0
        for cols in combinations(range(X.n), m):
            sub = M[:, cols]
            s += abs(np.linalg.det(sub)) ** 2
        total *= s if k >= X.field.r1 else math.sqrt(s)
    return total


def content_norm(vec, field: NumberFieldSpec) -> Fraction:
    """Norm of the content (gcd) fractional ideal of a vector of elements."""
    elems = [x for x in vec if x]
    if not elems:
        raise DomainError("content of the zero vector")
    if field.is_rational:
        den = math.lcm(*(x.coords[0].denominator for x in elems))
        num = math.gcd(*(int(x.coords[0] * den) for x in elems))
        return Fraction(num, den)
    if not field.is_quadratic:
        raise ConfigurationError("exact content needs a quadratic field")
    den = 1
    for x in elems:
        den = math.lcm(den, x.coords[0].denominator, x.coords[1].denominator)
    rows = []
    t, nm = field.omega_trace, field.omega_norm
    for x in elems:
        a = int(x.coords[0] * den)
        b = int(x.coords[1] * den)
        rows.append([a, b])                      # x
        rows.append([-b * nm, a + b * t])        # w * x
    H = hnf(rows)
    index = abs(H[0][0] * H[1][1])
    return Fraction(index, den * den)


def finite_height(X: MatrixOverField) -> Fraction:
    """Exact product over finite places of the matrix height: the inverse
    norm of the content ideal of the vector of maximal minors."""
    minors = X.maximal_minors()
    if not any(minors):
        raise DegeneracyError("rows are dependent over the field")
    return 1 / content_norm(minors, X.field)


def global_height(X: MatrixOverField, twist: ArchMatrix | None = None) -> float:
    """Adelic height: exact finite part times the archimedean part.

    Only archimedean twists are supported; the finite component of any
    twist is the identity.
    """
    if X.rank() < X.m:
        raise DegeneracyError("rows are dependent over the field")
    hf = finite_height(X)
    ha, degenerate = arch_matrix_height(arch_components(X, twist))
    if degenerate:
        raise DegeneracyError("twisted archimedean component is singular")
    return float(hf) * ha
