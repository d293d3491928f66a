"""Double-coset combinatorics for the two averaging-operator families.

The first family acts on rank-n lattices through index-q sublattices; the
second acts on m x n matrices through integral m x m cosets classified by
their elementary divisors.  Everything here is exact integer arithmetic;
q is a prime for every brute-force realization over Z (prime powers are
allowed wherever only the closed forms are involved).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError, ResourceLimitError
from .linalg import column_hnf, hnf, invert_unimodular, rank_mod_p, rank_rational, snf_with_transforms
from .numberfield import FieldElement, NumberFieldSpec, PrimeIdealData, rational_field

INVERSION_EXHAUSTIVE_BUDGET = 10**7
INVERSION_SAMPLE_SIZE = 10**5


# ---------------------------------------------------------------------------
# representatives of the index-q coset family


@dataclass(frozen=True)
class CosetRep:
    """One representative: identity block of size j, the uniformizer at
    position (j, j), and the offset row to its right."""

    j: int
    offsets: tuple
    matrix: tuple

    def det_norm(self, q: int) -> bool:
        return True


def coset_reps_Tp(n: int, q: int) -> list[CosetRep]:
    """The 1 + q + ... + q^(n-1) left-coset representatives h(j; a)."""
    if n < 2:
        raise DomainError("need n >= 2")
    reps = []
    for j in range(n):
        width = n - j - 1
        for offs in itertools.product(range(q), repeat=width):
            M = [[0] * n for _ in range(n)]
            for i in range(n):
                M[i][i] = 1
            M[j][j] = q
            for t, a in enumerate(offs):
                M[j][j + 1 + t] = a
            reps.append(CosetRep(j, offs, tuple(tuple(r) for r in M)))
    return reps


def coset_reps_pairwise_distinct(reps: list[CosetRep]) -> bool:
    """Right-equivalence classes via column Hermite canonicalization."""
    seen = set()
    for r in reps:
        key = tuple(tuple(row) for row in column_hnf([list(row) for row in r.matrix]))
        if key in seen:
            return False
        seen.add(key)
    return True


def index_q_sublattices(n: int, q: int) -> set:
    """All index-q sublattices of Z^n as canonical row-HNF keys (q prime)."""
    out = set()
    for j in range(n):
        for offs in itertools.product(range(q), repeat=n - j - 1):
            M = [[0] * n for _ in range(n)]
            for i in range(n):
                M[i][i] = 1
            M[j][j] = q
            for t, a in enumerate(offs):
                M[j + 1 + t][j] = a
            out.add(tuple(tuple(r) for r in hnf(M)))
    return out


def all_index_q_sublattices_hnf(n: int, q: int) -> set:
    """Independent oracle: enumerate upper-triangular HNF matrices of
    determinant q directly."""
    out = set()
    for pos in range(n):
        diag = [1] * n
        diag[pos] = q
        above = [(i, j) for j in range(n) for i in range(j) if diag[j] > 1]
        for combo in itertools.product(range(q), repeat=len(above)):
            M = [[0] * n for _ in range(n)]
            for i in range(n):
                M[i][i] = diag[i]
            for (i, j), v in zip(above, combo):
                M[i][j] = v
            out.add(tuple(tuple(r) for r in M))
    return out


# ---------------------------------------------------------------------------
# degrees and the local zeta identity


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def hnf_reps_det_power(m: int, q: int, k: int):
    """All upper-triangular Hermite representatives of determinant q^k
    (canonical under row operations: entry (i, j) reduced mod the pivot of
    column j).  These index the index-q^k sublattices of Z^m."""
    for bs in _compositions(k, m):
        diag = [q**b for b in bs]
        cells = [(i, j) for j in range(m) for i in range(j)]
        ranges = [range(diag[j]) for (i, j) in cells]
        for combo in itertools.product(*ranges):
            M = [[0] * m for _ in range(m)]
            for i in range(m):
                M[i][i] = diag[i]
            for (i, j), v in zip(cells, combo):
                M[i][j] = v
            yield M


def left_coset_reps_det_power(m: int, q: int, k: int):
    """Left-coset representatives of determinant q^k: upper triangular,
    entry (i, j) reduced mod the pivot of row i.

    These are canonical under right multiplication by unimodular integral
    matrices, which is the equivalence matching operator sums of the form
    sum_h f(h^(-1) X) over left cosets hK."""
    for bs in _compositions(k, m):
        diag = [q**b for b in bs]
        cells = [(i, j) for i in range(m) for j in range(i + 1, m)]
        ranges = [range(diag[i]) for (i, j) in cells]
        for combo in itertools.product(*ranges):
            M = [[0] * m for _ in range(m)]
            for i in range(m):
                M[i][i] = diag[i]
            for (i, j), v in zip(cells, combo):
                M[i][j] = v
            yield M


def hecke_degree(m: int, q: int, k: int, mode: str = "closed_form") -> int:
    """Number of cosets of determinant q^k in dimension m.

    closed_form evaluates prod_{i=1}^{m-1} (q^(k+i)-1)/(q^i-1) exactly;
    brute_force counts Hermite representatives (equivalently index-q^k
    sublattices of Z^m) one by one.
    """
    if m < 1 or k < 0:
        raise DomainError("need m >= 1 and k >= 0")
    if mode == "closed_form":
        val = Fraction(1)
        for i in range(1, m):
            val *= Fraction(q ** (k + i) - 1, q**i - 1)
        assert val.denominator == 1
        return int(val)
    if mode == "brute_force":
        return sum(1 for _ in hnf_reps_det_power(m, q, k))
    raise ConfigurationError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class ZetaIdentityReport:
    partial_sum: Fraction
    target: Fraction
    gap: Fraction
    tail_bound: Fraction


def local_zeta_identity(m: int, n: int, q: int, K: int) -> ZetaIdentityReport:
    """Partial sums of sum_k deg(k) q^(-k n) against the product of local
    zeta factors, with an exact geometric tail bound."""
    if n <= m:
        raise DomainError("divergent regime: need n > m")
    if K < 1:
        raise DomainError("need K >= 1")
    partial = Fraction(0)
    for k in range(K + 1):
        partial += Fraction(hecke_degree(m, q, k), q ** (k * n))
    target = Fraction(1)
    for i in range(m):
        target *= Fraction(1) / (1 - Fraction(1, q ** (n - i)))
    gap = target - partial
    cm = Fraction(1)
    for i in range(1, m):
        cm *= Fraction(q**i, q**i - 1)
    ratio = Fraction(1, q ** (n - m + 1))
    tail = cm * ratio ** (K + 1) / (1 - ratio)
    return ZetaIdentityReport(partial, target, gap, tail)


# ---------------------------------------------------------------------------
# the inversion identity between integrality and primitivity indicators


@dataclass(frozen=True)
class HeckeWord:
    """Formal Z-linear combination of local operators, one prime at a time;
    each term is (coefficient, sorted exponent tuple)."""

    m: int
    q: int
    terms: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        for _, exps in self.terms:
            if len(exps) != self.m or any(
                    exps[i] > exps[i + 1] for i in range(len(exps) - 1)):
                raise ConfigurationError("exponent tuples must be sorted and "
                                         "of length m")

    def degree(self) -> int:
        return sum(c * _tuple_degree(self.m, self.q, exps)
                   for c, exps in self.terms)


def _tuple_degree(m: int, q: int, exps: tuple[int, ...]) -> int:
    k = sum(exps)
    count = 0
    for M in left_coset_reps_det_power(m, q, k):
        if _local_exponents(M, q) == tuple(exps):
            count += 1
    return count


def _local_exponents(M, q: int) -> tuple:
    S, _, _ = snf_with_transforms(M)
    out = []
    for i in range(min(len(S), len(S[0]) if S else 0)):
        s = S[i][i]
        out.append(math.inf if s == 0 else _ord(abs(s), q))
    return tuple(out)


def _ord(v: int, q: int) -> int:
    k = 0
    while v % q == 0:
        v //= q
        k += 1
    return k


def inversion_word(m: int, q: int) -> HeckeWord:
    """The alternating combination that inverts the integrality sum."""
    terms = []
    for i in range(m + 1):
        exps = tuple([0] * (m - i) + [1] * i)
        terms.append(((-1) ** i * q ** (i * (i - 1) // 2), exps))
    return HeckeWord(m, q, tuple(terms))


def elementary_reps(m: int, q: int, i: int) -> list:
    """Left-coset representatives with elementary exponents (0^(m-i), 1^i)."""
    return [M for M in left_coset_reps_det_power(m, q, i)
            if rank_mod_p(M, q) == m - i]


def _left_divide_integral(h, X) -> bool:
    """Whether h^(-1) X is integral for upper-triangular h."""
    m = len(h)
    n = len(X[0])
    Y = [[0] * n for _ in range(m)]
    for i in range(m - 1, -1, -1):
        for c in range(n):
            v = X[i][c] - sum(h[i][j] * Y[j][c] for j in range(i + 1, m))
            if v % h[i][i]:
                return False
            Y[i][c] = v // h[i][i]
    return True


def _left_divide(h, X):
    m = len(h)
    n = len(X[0])
    Y = [[0] * n for _ in range(m)]
    for i in range(m - 1, -1, -1):
        for c in range(n):
            v = X[i][c] - sum(h[i][j] * Y[j][c] for j in range(i + 1, m))
            if v % h[i][i]:
                return None
            Y[i][c] = v // h[i][i]
    return Y


@dataclass
class InversionReport:
    passed: bool
    mode: str
    classes_checked: int
    forward_checked: int
    failures: list

    def __bool__(self):
        return self.passed


def tamagawa_inversion_check(m: int, n: int, q: int, depth: int,
                             budget: int = INVERSION_EXHAUSTIVE_BUDGET,
                             sample_size: int = INVERSION_SAMPLE_SIZE,
                             seed: int = 0) -> InversionReport:
    """Check both directions of the primitivity/integrality inversion on
    residue classes mod q^depth.

    Backward: the alternating coset sum applied to the integrality
    indicator returns the primitivity indicator, for every class.
    Forward: summing the primitive-part indicator over all cosets of every
    determinant returns 1, for classes with independent rows.
    """
    if not (1 <= m < n):
        raise DomainError("need 1 <= m < n")
    space = q ** (depth * m * n)
    exhaustive = space <= budget
    rng = random.Random(seed)
    word = inversion_word(m, q)
    reps_by_i = {i: elementary_reps(m, q, i) for i in range(m + 1)}
    failures = []

    def classes():
        if exhaustive:
            for flat in itertools.product(range(q**depth), repeat=m * n):
                yield flat
        else:
            for _ in range(sample_size):
                yield tuple(rng.randrange(q**depth) for _ in range(m * n))

    checked = 0
    forward_checked = 0
    for flat in classes():
        X = [list(flat[i * n:(i + 1) * n]) for i in range(m)]
        checked += 1
        f_pr = 1 if rank_mod_p(X, q) == m else 0
        rhs = 0
        for coeff, exps in word.terms:
            i = sum(1 for e in exps if e == 1)
            rhs += coeff * sum(1 for h in reps_by_i[i]
                               if _left_divide_integral(h, X))
        if rhs != f_pr:
            failures.append(("backward", flat, f_pr, rhs))
            continue
        if rank_rational(X) == m:
            forward_checked += 1
            S, _, _ = snf_with_transforms(X)
            ksum = sum(_ord(S[i][i], q) for i in range(m))
            total = 0
            for k in range(ksum + 1):
                for h in left_coset_reps_det_power(m, q, k):
                    Y = _left_divide(h, X)
                    if Y is not None and rank_mod_p(Y, q) == m:
                        total += 1
            if total != 1:
                failures.append(("forward", flat, 1, total))
    return InversionReport(not failures, "exhaustive" if exhaustive else "sampled",
                           checked, forward_checked, failures)


# ---------------------------------------------------------------------------
# local Smith decomposition


@dataclass(frozen=True)
class SmithLocalDecomposition:
    exponents: tuple          # ints, math.inf for dependent rows
    primitive_part: tuple     # m x n integer matrix, full rank mod q
    witness: tuple            # m x m integer matrix, determinant a unit at q

    def reassemble(self, q: int):
        m = len(self.exponents)
        n = len(self.primitive_part[0])
        out = [[0] * n for _ in range(m)]
        for i in range(m):
            for c in range(n):
                acc = 0
                for j in range(m):
                    e = self.exponents[j]
                    if e is math.inf or e == math.inf:
                        continue
                    acc += self.witness[i][j] * q**e * self.primitive_part[j][c]
                out[i][c] = acc
        return out


def smith_local(X, q: int) -> SmithLocalDecomposition:
    """Local Smith decomposition X = witness * diag(q^a) * primitive_part.

    The exponents are the q-parts of the elementary divisors (ascending,
    math.inf for dependent rows); the primitive part has full rank mod q;
    the witness is an integer matrix of determinant +-1, so the product
    reassembles X exactly.
    """
    if not any(any(row) for row in X):
        raise DomainError("zero matrix has no decomposition")
    m, n = len(X), len(X[0])
    S, U, V = snf_with_transforms(X)
    Uinv = invert_unimodular(U)
    Vinv = invert_unimodular(V)
    exps = []
    tparts = []
    for i in range(m):
        s = S[i][i] if i < len(S) and i < len(S[0]) else 0
        if s == 0:
            exps.append(math.inf)
            tparts.append(1)
        else:
            e = _ord(abs(s), q)
            exps.append(e)
            tparts.append(s // q**e)
    P = [[tparts[i] * Vinv[i][c] for c in range(n)] for i in range(m)]
    if rank_mod_p(P, q) != m:
        raise ConfigurationError("primitive part lost rank (q not prime?)")
    return SmithLocalDecomposition(tuple(exps),
                                   tuple(tuple(r) for r in P),
                                   tuple(tuple(r) for r in Uinv))


# ---------------------------------------------------------------------------
# group orders and the stabilizer-ratio identity


@dataclass(frozen=True)
class GroupOrderReport:
    gl_order: int
    stabilizer_order: int | None
    ratio_identity_holds: bool | None


def gl_order(n: int, q: int, level: int) -> int:
    """Order of the invertible n x n matrices over Z/q^level."""
    base = 1
    for i in range(n):
        base *= q**n - q**i
    return q ** ((level - 1) * n * n) * base


def stabilizer_order(n: int, q: int, level: int, mprime: int,
                     ls: tuple[int, ...]) -> int:
    """Order of the stabilizer of the congruence coset attached to a
    primitive block and row scales q^(l_i)."""
    if len(ls) != mprime or any(ls[i] < ls[i + 1] for i in range(mprime - 1)):
        raise DomainError("row scales must be non-increasing")
    if ls[0] != level or (mprime > 1 and ls[-1] < 1):
        raise DomainError("need l_1 = level and positive scales")
    out = q ** (level * mprime * (n - mprime)) * gl_order(n - mprime, q, level)
    for i in range(1, mprime):
        out *= q ** (n * (ls[0] - ls[i]))
    return out


def ratio_identity(n: int, q: int, level: int, mprime: int,
                   ls: tuple[int, ...]) -> bool:
    """stab/|GL| times the inverse local zeta factors equals
    q^(-n * sum l_i), in exact rationals."""
    lhs = Fraction(stabilizer_order(n, q, level, mprime, ls),
                   gl_order(n, q, level))
    for i in range(mprime):
        lhs *= 1 - Fraction(1, q ** (n - i))
    return lhs == Fraction(1, q ** (n * sum(ls)))


def group_orders(n: int, q: int, level: int, mprime: int | None = None,
                 ls: tuple[int, ...] | None = None) -> GroupOrderReport:
    g = gl_order(n, q, level)
    if mprime is None:
        return GroupOrderReport(g, None, None)
    s = stabilizer_order(n, q, level, mprime, tuple(ls))
    return GroupOrderReport(g, s, ratio_identity(n, q, level, mprime, tuple(ls)))


def _det_mod(rows_flat: np.ndarray, n: int, mod: int) -> np.ndarray:
    """Vectorized determinant mod `mod` of shape (..., n*n) integer arrays."""
    a = rows_flat
    if n == 1:
        return a[..., 0] % mod
    if n == 2:
        return (a[..., 0] * a[..., 3] - a[..., 1] * a[..., 2]) % mod
    if n == 3:
        d = (a[..., 0] * (a[..., 4] * a[..., 8] - a[..., 5] * a[..., 7])
             - a[..., 1] * (a[..., 3] * a[..., 8] - a[..., 5] * a[..., 6])
             + a[..., 2] * (a[..., 3] * a[..., 7] - a[..., 4] * a[..., 6]))
        return d % mod
    raise ResourceLimitError("vectorized determinants cover n <= 3")


def gl_order_bruteforce(n: int, q: int, level: int) -> int:
    """Literal count of matrices over Z/q^level with unit determinant."""
    M = q**level
    if n <= 2 or M ** (n * n) <= 4 * 10**6:
        grids = np.indices((M,) * (n * n)).reshape(n * n, -1).T.astype(np.int64)
        dets = _det_mod(grids, n, M)
        return int(np.count_nonzero(dets % q))
    if n == 3:
        # fix the first two rows (vectorized), expand along the third row
        six = np.indices((M,) * 6).reshape(6, -1).T.astype(np.int64)
        b0, b1, b2, c0, c1, c2 = (six[:, i] for i in range(6))
        m0 = (b1 * c2 - b2 * c1) % M
        m1 = (b0 * c2 - b2 * c0) % M
        m2 = (b0 * c1 - b1 * c0) % M
        total = 0
        for r0 in range(M):
            for r1 in range(M):
                for r2 in range(M):
                    det = (r0 * m0 - r1 * m1 + r2 * m2) % M
                    total += int(np.count_nonzero(det % q))
        return total
    raise ResourceLimitError("exhaustive GL order covers n <= 3")


def stabilizer_order_bruteforce(n: int, q: int, level: int, m: int,
                                ls_full: tuple[int, ...]) -> int:
    """Exhaustive stabilizer count: matrices g with unit determinant and
    row_i(g) congruent to e_i mod q^(l_i) for i < m."""
    M = q**level
    if len(ls_full) != m:
        raise DomainError("need one scale per constrained row")
    row_choices = []
    for i in range(n):
        li = ls_full[i] if i < m else 0
        step = q**li
        vals = []
        base = [1 if j == i else 0 for j in range(n)]
        for combo in itertools.product(range(0, M, step) if step < M else [0],
                                       repeat=n):
            row = tuple((base[j] + combo[j]) % M for j in range(n))
            vals.append(row)
        row_choices.append(vals)
    total = 0
    for rows in itertools.product(*row_choices):
        flat = np.array([v for row in rows for v in row], dtype=np.int64)
        if _det_mod(flat[None, :], n, M)[0] % q:
            total += 1
    return total


# ---------------------------------------------------------------------------
# equidistribution of linear solution counts over residue fields


def crux_exhaustive_sweep(p: int, n: int, m: int) -> tuple[int, bool]:
    """Exhaustively verify the uniform-count property for every full-rank
    m x (n-1) matrix over F_p and every target (vectorized).

    Returns (number of (matrix, target) cases checked, all_uniform).
    """
    width = n - 1
    if not 1 <= m <= width:
        raise DomainError("need 1 <= m <= n-1")
    if m > 2:
        raise DomainError("the vectorized sweep covers m <= 2")
    N = p ** (m * width)
    A = p ** width
    mats = np.indices((p,) * (m * width)).reshape(m * width, -1).T
    mats = mats.reshape(N, m, width)
    if m == 1:
        full = np.any(mats[:, 0, :] % p != 0, axis=1)
    else:
        full = np.zeros(N, dtype=bool)
        for c1 in range(width):
            for c2 in range(c1 + 1, width):
                det = (mats[:, 0, c1] * mats[:, 1, c2]
                       - mats[:, 0, c2] * mats[:, 1, c1]) % p
                full |= det != 0
    vecs = np.indices((p,) * width).reshape(width, -1)  # (width, A)
    prods = np.einsum("nmw,wa->nma", mats, vecs) % p
    code = np.zeros((N, A), dtype=np.int64)
    for i in range(m):
        code = code * p + prods[:, i, :]
    hist = np.zeros((N, p**m), dtype=np.int64)
    rows = np.broadcast_to(np.arange(N)[:, None], (N, A))
    np.add.at(hist, (rows.ravel(), code.ravel()), 1)
    expected = p ** (width - m)
    ok = bool(np.all(hist[full] == expected))
    cases = int(np.count_nonzero(full)) * p**m
    return cases, ok


def crux_equidistribution_check(xbar_rows, target, p: int) -> int:
    """Count offset tuples a with Xbar a = target over F_p; the hypothesis
    (independent rows) forces exactly p^(n-1-m) of them."""
    m = len(xbar_rows)
    width = len(xbar_rows[0])
    if rank_mod_p(xbar_rows, p) < m:
        raise PreconditionError("rows are dependent over the residue field")
    count = 0
    for a in itertools.product(range(p), repeat=width):
        if all(sum(row[t] * a[t] for t in range(width)) % p == target[i] % p
               for i, row in enumerate(xbar_rows)):
            count += 1
    expected = p ** (width - m)
    if count != expected:
        raise PreconditionError(
            f"count {count} differs from p^(n-1-m) = {expected}")
    return count


# ---------------------------------------------------------------------------
# sublattice bases over the ring of integers


def residue_lifts(field: NumberFieldSpec, prime: PrimeIdealData) -> list[FieldElement]:
    """A transversal of the residue field, minimal embedding length first,
    indexed by residue value 0..p-1 (deterministic tie-break)."""
    p = prime.rational_prime
    if field.is_rational:
        return [field.element(r) for r in range(p)]
    from .numberfield import embed_norm_sq, residue
    best: dict[int, tuple] = {}
    for c0 in range(-p, p + 1):
        for c1 in range(-p, p + 1):
            x = field.element(c0, c1)
            r = residue(x, prime)
            key = (embed_norm_sq(x), c0, c1)
            if r not in best or key < best[r][0]:
                best[r] = (key, x)
    return [best[r][1] for r in range(p)]


def sublattice_bases(field: NumberFieldSpec, n: int,
                     prime: PrimeIdealData) -> list:
    """Bases (rows over O_F) of the 1 + q + ... + q^(n-1) index-q
    submodules of O_F^n attached to a principal degree-one prime."""
    if prime.splitting_type not in ("split",) and not field.is_rational:
        raise ConfigurationError("need a split principal prime")
    q = prime.residue_norm
    lifts = residue_lifts(field, prime)
    pi = prime.generator
    one, zero = field.one(), field.zero()
    out = []
    for j in range(n):
        for offs in itertools.product(lifts, repeat=n - j - 1):
            M = [[one if i == c else zero for c in range(n)] for i in range(n)]
            M[j][j] = pi
            for t, a in enumerate(offs):
                M[j + 1 + t][j] = a
                M[j + 1 + t][j + 1 + t] = one
            out.append(tuple(tuple(r) for r in M))
    return out
