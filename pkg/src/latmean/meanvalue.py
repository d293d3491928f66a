"""Verification engines for the lattice mean value identities.

The moduli-space integrals are never sampled: the computable surrogate is
the average of lattice-point counts over the family of index-q submodules
of O_F^n, rescaled to constant covolume by the exact factor q^(-1/(nd)).
As q grows through split principal primes these averages converge to the
adelic volume of the test function, and the operations here measure that
convergence. The combinatorial side (primitive densities, echelon
densities, the row-space decomposition) is exact.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError
from .linalg import snf_with_transforms
from .numberfield import (
    NumberFieldSpec,
    PrimeIdealData,
    ZetaValue,
    dedekind_zeta,
    rational_field,
    riemann_zeta_em,
)
from .lattices import (
    EmbeddedLattice,
    PowerScale,
    Region,
    ball_volume,
    enumerate_points,
    standard_lattice,
)

PRIMITIVE_ENUM_BUDGET = 2 * 10**7
PRIMITIVE_SAMPLES = 10**6


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class AdelicTestFunction:
    """A factorizable test function: finite congruence data (per-prime
    exponents on a principal scale, optional rational scale) times an
    archimedean region."""

    field: NumberFieldSpec
    n: int
    region: Region
    exponents: tuple[tuple[PrimeIdealData, int], ...] = ()
    eta: Fraction | None = None
    shift: tuple | None = None

    def finite_volume(self) -> Fraction:
        vol = Fraction(1)
        for prime, e in self.exponents:
            vol *= Fraction(prime.residue_norm) ** (-self.n * e)
        if self.eta is not None:
            et = Fraction(self.eta)
            vol *= Fraction(et.denominator, abs(et.numerator)) ** (
                self.n * self.field.degree)
        return vol

    def total_volume(self) -> float:
        disc = abs(self.field.discriminant)
        dim = self.n * self.field.degree
        return disc ** (-self.n / 2) * float(self.finite_volume()) * \
            self.region.volume(dim)

    def finite_scalar(self):
        c = self.field.one()
        for prime, e in self.exponents:
            c = c * prime.generator ** e
        if self.eta is not None:
            c = c * Fraction(self.eta)
        return c

    def support_primes(self) -> set[int]:
        out = {prime.rational_prime for prime, _ in self.exponents}
        if self.eta is not None:
            et = Fraction(self.eta)
            for v in (et.numerator, et.denominator):
                v = abs(v)
                d = 2
                while d * d <= v:
                    if v % d == 0:
                        out.add(d)
                        while v % d == 0:
                            v //= d
                    d += 1
                if v > 1:
                    out.add(v)
        return out

    def contains_origin(self) -> bool:
        r = self.region
        if r.kind == "box":
            return all(a <= 0 <= b for a, b in r.bounds)
        return r.kind == "ball" or r.r1 == 0


@dataclass
class ConvergenceRow:
    suite: str
    field: str
    n: int
    q: int
    average: float
    target: float
    gap: float
    seconds: float


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow] = dataclass_field(default_factory=list)

    def add(self, suite, field_label, n, q, average, target, seconds):
        self.rows.append(ConvergenceRow(
            suite, field_label, n, q, average, target,
            abs(average - target), seconds))

    def gaps_decreasing(self) -> bool:
        gaps = [r.gap for r in self.rows]
        return all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1))

    def csv_lines(self, include_seconds: bool = True) -> list[str]:
        head = "suite,field,n,q,average,target,gap" + \
            (",seconds" if include_seconds else "")
        out = [head]
        for r in self.rows:
            cells = [r.suite, r.field, str(r.n), str(r.q),
                     f"{r.average:.12g}", f"{r.target:.12g}", f"{r.gap:.12g}"]
            if include_seconds:
                cells.append(f"{r.seconds:.3f}")
            out.append(",".join(cells))
        return out


# ---------------------------------------------------------------------------
# sublattice incidence machinery


def _check_prime_compatible(f: AdelicTestFunction, prime: PrimeIdealData):
    if prime.rational_prime in f.support_primes():
        raise PreconditionError(
            f"prime over {prime.rational_prime} meets the finite support")
    if f.shift is not None:
        raise ConfigurationError("congruence shifts are handled through "
                                 "module descriptions, not here")


def _residue_rows(lat: EmbeddedLattice, pts, prime: PrimeIdealData) -> np.ndarray:
    """Residues mod p of the underlying O_F^n coordinates, one row per
    point (the principal finite scale is a unit at p and drops out)."""
    p = prime.rational_prime
    if not pts:
        return np.zeros((0, lat.n), dtype=np.int64)
    Z = np.array([pt.z for pt in pts], dtype=np.int64)
    O = Z @ lat.basis_int  # numerators of o-coords times den
    inv_den = pow(lat.den % p, -1, p)
    O = (O % p) * inv_den % p
    d = lat.field.degree
    if d == 1:
        return O
    w = prime.omega_residue
    return (O[:, 0::2] + w * O[:, 1::2]) % p


def _sublattice_offsets(n: int, q: int) -> list[int]:
    offs = [0]
    for j in range(n - 1):
        offs.append(offs[-1] + q ** (n - 1 - j))
    return offs


def _point_lattice_ids(r, n: int, q: int, offsets, inv_table):
    """Flat indices of the index-q sublattices containing a point with
    residue row r (ids within 0 .. 1+q+...+q^(n-1))."""
    ids: list[int] = []
    arrays: list[np.ndarray] = []
    for j in range(n):
        width = n - 1 - j
        rj = int(r[j])
        if width == 0:
            if rj == 0:
                ids.append(offsets[j])
            continue
        tail = r[j + 1:]
        nz = np.nonzero(tail)[0]
        if nz.size == 0:
            if rj == 0:
                arrays.append(np.arange(offsets[j], offsets[j] + q**width))
            continue
        piv = int(nz[-1])
        ipiv = inv_table[int(tail[piv])]
        free = [u for u in range(width) if u != piv]
        if not free:
            ids.append(offsets[j] + (rj * ipiv) % q)
            continue
        if len(free) == 1:
            u = free[0]
            af = np.arange(q, dtype=np.int64)
            apiv = ((rj - af * int(tail[u])) * ipiv) % q
            arrays.append(offsets[j] + af * q**u + apiv * q**piv)
            continue
        for combo in itertools.product(range(q), repeat=len(free)):
            s = rj
            idx = 0
            for u, a in zip(free, combo):
                s -= a * int(tail[u])
                idx += a * q**u
            ids.append(offsets[j] + idx + ((s * ipiv) % q) * q**piv)
    if arrays:
        ids_arr = np.concatenate([np.array(ids, dtype=np.int64)] + arrays) \
            if ids else np.concatenate(arrays)
        return ids_arr
    return np.array(ids, dtype=np.int64)


def _gather_incidences(field, n, f, prime, want_lists: bool):
    """Enumerate the points of the module within the q^(1/(nd))-scaled
    region and distribute them over the index-q sublattice family.

    Returns (points, counts, lists) where counts[i] is the number of
    points in sublattice i and lists (when requested) holds point indices.
    """
    q = prime.residue_norm
    d = field.degree
    lat = standard_lattice(field, n, f.finite_scalar())
    scale = PowerScale(q, 1, n * d)
    pts = [pt for pt in enumerate_points(lat, f.region, radial_scale=scale)
           if not pt.is_zero()]
    res = _residue_rows(lat, pts, prime)
    offsets = _sublattice_offsets(n, q)
    L = (q**n - 1) // (q - 1)
    inv_table = [0] * q
    for v in range(1, q):
        inv_table[v] = pow(v, -1, q)
    counts = np.zeros(L, dtype=np.int64)
    lists: list[list[int]] | None = [[] for _ in range(L)] if want_lists else None
    for t in range(len(pts)):
        ids = _point_lattice_ids(res[t], n, q, offsets, inv_table)
        np.add.at(counts, ids, 1)
        if want_lists:
            for i in ids.tolist():
                lists[i].append(t)
    return lat, pts, counts, lists


def siegel_hecke_average(field: NumberFieldSpec, n: int,
                         f: AdelicTestFunction, prime: PrimeIdealData,
                         include_origin: bool = False) -> float:
    """Average over the index-q sublattice family of the number of nonzero
    points in the rescaled region; converges to the adelic volume of f as
    the residue norm grows (plus f(0) when the origin is included)."""
    if n < 2:
        raise DomainError("need n >= 2")
    _check_prime_compatible(f, prime)
    _, _, counts, _ = _gather_incidences(field, n, f, prime, False)
    avg = float(counts.sum()) / len(counts)
    if include_origin and f.contains_origin():
        avg += 1.0
    return avg


def _line_keys(field: NumberFieldSpec, pts) -> list:
    """Canonical key of the F-line through each point (exact)."""
    keys = []
    if field.is_rational:
        for pt in pts:
            nums = [c.numerator for c in pt.ocoords]
            dens = [c.denominator for c in pt.ocoords]
            D = math.lcm(*dens)
            w = [num * (D // den) for num, den in zip(nums, dens)]
            g = math.gcd(*w)
            w = [x // g for x in w]
            lead = next(x for x in w if x)
            if lead < 0:
                w = [-x for x in w]
            keys.append(tuple(w))
        return keys
    d = field.degree
    for pt in pts:
        elems = [field.element(*pt.ocoords[i * d:(i + 1) * d])
                 for i in range(len(pt.ocoords) // d)]
        lead = next(e for e in elems if e)
        inv = lead.inverse()
        keys.append(tuple((e * inv).coords for e in elems))
    return keys


def rogers_pair_average(field: NumberFieldSpec, n: int,
                        f1: AdelicTestFunction, f2: AdelicTestFunction,
                        prime: PrimeIdealData,
                        mode: str = "independent_pairs") -> float:
    """Average over the sublattice family of two-point sums.

    independent_pairs counts ordered pairs of points independent over the
    field (target: product of the two volumes); full_square counts all
    ordered pairs of nonzero points, i.e. the squared one-point count
    (target: the second-moment prediction; rational field only).
    """
    if n < 3:
        raise DomainError("pair averages need n >= 3")
    _check_prime_compatible(f1, prime)
    if mode == "full_square":
        if not field.is_rational:
            raise ConfigurationError("the squared-count mode has a closed "
                                     "prediction over the rationals only")
        _, _, counts, _ = _gather_incidences(field, n, f1, prime, False)
        return float((counts.astype(np.float64) ** 2).mean())
    if mode != "independent_pairs":
        raise ConfigurationError(f"unknown mode {mode!r}")
    _check_prime_compatible(f2, prime)
    same = f1 == f2
    _, pts1, _, lists1 = _gather_incidences(field, n, f1, prime, True)
    keys1 = _line_keys(field, pts1)
    if same:
        lists2, keys2 = lists1, keys1
    else:
        _, pts2, _, lists2 = _gather_incidences(field, n, f2, prime, True)
        keys2 = _line_keys(field, pts2)
    total = 0
    for l1, l2 in zip(lists1, lists2):
        if not l1 or not l2:
            continue
        c1: dict = {}
        for t in l1:
            k = keys1[t]
            c1[k] = c1.get(k, 0) + 1
        if same:
            c2 = c1
        else:
            c2 = {}
            for t in l2:
                k = keys2[t]
                c2[k] = c2.get(k, 0) + 1
        dep = sum(v * c2.get(k, 0) for k, v in c1.items())
        total += len(l1) * len(l2) - dep
    return total / len(lists1)


# ---------------------------------------------------------------------------
# the second-moment prediction series (rational field)


@dataclass(frozen=True)
class SecondMomentPrediction:
    value: float
    certified_error: float
    volume: float
    series_total: float
    series_partial: float
    truncation: int
    remainder_bound: float


def second_moment_series_term(n: int, R: float, a: int, b: int) -> float:
    """Contribution of the ratio pair (a, b), both signs folded in."""
    return 2.0 * b ** (-n) * ball_volume(n) * min(R, R * b / a) ** n


def second_moment_prediction(field: NumberFieldSpec, n: int, region: Region,
                             truncation: int = 200) -> SecondMomentPrediction:
    """Predicted average of the squared lattice-point count for the
    indicator of a ball with trivial finite part.

    The ratio series over c = +-a/b collapses under scaling to
    (2 zeta(n-1) - zeta(n)) / zeta(n); the value combines that closed form
    with certified zeta evaluations, and the explicit partial sum over
    a, b <= truncation is cross-checked against a comparison-integral
    bound on its remainder.
    """
    if not field.is_rational:
        raise ConfigurationError("closed-form local factors exist over the "
                                 "rationals only")
    if n <= 2:
        raise DomainError("the prediction series diverges unless n >= 3")
    if region.kind != "ball":
        raise DomainError("the prediction is stated for balls")
    R = float(region.r2)
    V = ball_volume(n) * R**n
    z1 = riemann_zeta_em(n - 1)
    z2 = riemann_zeta_em(n)
    S = (2 * z1.value - z2.value) / z2.value
    value = V * V + 2 * V * S
    dS = (2 * z1.certified_error + z2.certified_error) / z2.value + \
        abs(S) * z2.certified_error / z2.value
    err = 2 * V * dS + 1e-12 * value
    T = truncation
    partial = 0.0
    for b in range(1, T + 1):
        for a in range(1, T + 1):
            if math.gcd(a, b) == 1:
                partial += second_moment_series_term(n, R, a, b)
    bound = 2 * V * T ** (2 - n) * (n / ((n - 1) * (n - 2)) + 1 / (n - 1))
    remainder = 2 * V * S - partial
    if not (-1e-9 * value <= remainder <= bound * (1 + 1e-9)):
        raise PreconditionError("series remainder escaped its certified bound")
    return SecondMomentPrediction(value, err, V, 2 * V * S, partial, T, bound)


# ---------------------------------------------------------------------------
# primitive densities


@dataclass(frozen=True)
class DensityReport:
    empirical: float
    target: float
    gap: float
    mode: str
    zeta_error: float


def _gcd_reduce_abs(arr: np.ndarray) -> np.ndarray:
    out = np.abs(arr[..., 0])
    for i in range(1, arr.shape[-1]):
        out = np.gcd(out, np.abs(arr[..., i]))
    return out


def primitive_density(field: NumberFieldSpec, n: int, m: int, half_width: int,
                      budget: int = PRIMITIVE_ENUM_BUDGET,
                      samples: int = PRIMITIVE_SAMPLES,
                      seed: int = 1) -> DensityReport:
    """Empirical density of primitive m x n integer matrices with entries
    in [-N, N] against the inverse zeta product.

    Primitivity is the triviality of the content of the maximal-minor
    vector: gcd of all m x m minors equal to 1 (full rank modulo every
    prime).  Falls back to seeded sampling past the enumeration budget.
    """
    if not field.is_rational:
        raise ConfigurationError("integer-matrix densities live over Q")
    if not (1 <= m < n):
        raise DomainError("need 1 <= m < n")
    if half_width < 10:
        raise DomainError("need a box half-width of at least 10")
    N = half_width
    side = 2 * N + 1
    total = side ** (m * n)
    zerr = 0.0
    target = 1.0
    for i in range(m):
        z = dedekind_zeta(field, n - i)
        target /= z.value
        zerr += z.certified_error / z.value
    if m == 1 and total <= budget:
        hits = 0
        row = np.arange(-N, N + 1, dtype=np.int64)
        if n == 2:
            g = np.gcd(np.abs(row)[:, None], np.abs(row)[None, :])
            hits = int(np.count_nonzero(g == 1))
        else:
            grids = np.meshgrid(*([row] * (n - 1)), indexing="ij")
            g0 = np.abs(grids[0])
            for gr in grids[1:]:
                g0 = np.gcd(g0, np.abs(gr))
            for x0 in row:
                hits += int(np.count_nonzero(np.gcd(abs(int(x0)), g0) == 1))
        emp = hits / total
        mode = "exhaustive"
    elif total <= min(budget, 10**6):
        hits = 0
        for flat in itertools.product(range(-N, N + 1), repeat=m * n):
            M = [list(flat[i * n:(i + 1) * n]) for i in range(m)]
            if _minor_gcd(M) == 1:
                hits += 1
        emp = hits / total
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        X = rng.integers(-N, N + 1, size=(samples, m, n)).astype(np.int64)
        if m == 1:
            g = _gcd_reduce_abs(X[:, 0, :])
        else:
            g = None
            for cols in itertools.combinations(range(n), m):
                sub = X[:, :, cols]
                d = _int_det_batch(sub)
                g = np.abs(d) if g is None else np.gcd(g, np.abs(d))
        emp = float(np.count_nonzero(g == 1)) / samples
        mode = "sampled"
    return DensityReport(emp, target, abs(emp - target), mode, zerr * target)


def _int_det_batch(sub: np.ndarray) -> np.ndarray:
    m = sub.shape[1]
    if m == 1:
        return sub[:, 0, 0]
    if m == 2:
        return sub[:, 0, 0] * sub[:, 1, 1] - sub[:, 0, 1] * sub[:, 1, 0]
    if m == 3:
        a = sub
        return (a[:, 0, 0] * (a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1])
                - a[:, 0, 1] * (a[:, 1, 0] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 0])
                + a[:, 0, 2] * (a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0]))
    raise DomainError("minor determinants cover m <= 3")


def _minor_gcd(M) -> int:
    m, n = len(M), len(M[0])
    g = 0
    for cols in itertools.combinations(range(n), m):
        sub = [[M[i][j] for j in cols] for i in range(m)]
        if m == 1:
            d = sub[0][0]
        elif m == 2:
            d = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
        else:
            from .linalg import det_bareiss
            d = det_bareiss(sub)
        g = math.gcd(g, abs(d))
    return g


# ---------------------------------------------------------------------------
# echelon forms and the row-space decomposition


@dataclass(frozen=True)
class EchelonForm:
    """A row-reduced echelon matrix over Q with its integer-vector density."""

    m: int
    k: int
    rows: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]
    density: Fraction

    def __post_init__(self):
        if not _is_rref(self.rows, self.pivots):
            raise ConfigurationError("matrix is not in row-reduced echelon form")


def _is_rref(rows, pivots) -> bool:
    m = len(rows)
    if len(pivots) != m or any(pivots[i] >= pivots[i + 1] for i in range(m - 1)):
        return False
    for i, p in enumerate(pivots):
        if rows[i][p] != 1:
            return False
        if any(rows[i][j] != 0 for j in range(p)):
            return False
        if any(rows[r][p] != 0 for r in range(m) if r != i):
            return False
    return True


def echelon_density(rows) -> Fraction:
    """Density of integer vectors x with x D integral: the reciprocal index
    of {x : x D integral} in Z^m, through the Smith form of the cleared
    matrix."""
    m = len(rows)
    den = 1
    for row in rows:
        for c in row:
            den = math.lcm(den, Fraction(c).denominator)
    A = [[int(Fraction(c) * den) for c in row] for row in rows]
    S, _, _ = snf_with_transforms(A)
    index = 1
    for i in range(m):
        s = abs(S[i][i])
        index *= den // math.gcd(s, den)
    return Fraction(1, index)


def echelon_density_bruteforce(rows) -> Fraction:
    """Independent count over one full period box."""
    m = len(rows)
    den = 1
    for row in rows:
        for c in row:
            den = math.lcm(den, Fraction(c).denominator)
    hits = 0
    for x in itertools.product(range(den), repeat=m):
        if all(sum(Fraction(rows[i][j]) * x[i] for i in range(m)).denominator == 1
               for j in range(len(rows[0]))):
            hits += 1
    return Fraction(hits, den**m)


def make_echelon_form(rows) -> EchelonForm:
    rows = tuple(tuple(Fraction(c) for c in row) for row in rows)
    pivots = []
    for row in rows:
        p = next((j for j, c in enumerate(row) if c), None)
        if p is None:
            raise ConfigurationError("echelon forms here have full rank")
        pivots.append(p)
    return EchelonForm(len(rows), len(rows[0]), rows, tuple(pivots),
                       echelon_density(rows))


def _fraction_pool(height_bound: int, den_bound: int) -> list[Fraction]:
    vals = {Fraction(0)}
    for b in range(1, den_bound + 1):
        for a in range(-height_bound, height_bound + 1):
            f = Fraction(a, b)
            if abs(f.numerator) <= height_bound and f.denominator <= den_bound:
                vals.add(f)
    return sorted(vals)


def echelon_forms(m: int, k: int, den_bound: int,
                  height_bound: int) -> list[EchelonForm]:
    """All rank-m row-reduced echelon m x k matrices whose non-pivot
    entries are fractions with numerator height and denominator within the
    bounds, each with its exact density."""
    if m > k:
        raise DomainError("need m <= k")
    pool = _fraction_pool(height_bound, den_bound)
    out = []
    for pivots in itertools.combinations(range(k), m):
        free = [(i, j) for i in range(m) for j in range(k)
                if j not in pivots and j > pivots[i]]
        for combo in itertools.product(pool, repeat=len(free)):
            rows = [[Fraction(0)] * k for _ in range(m)]
            for i, p in enumerate(pivots):
                rows[i][p] = Fraction(1)
            for (i, j), v in zip(free, combo):
                rows[i][j] = v
            out.append(EchelonForm(m, k, tuple(tuple(r) for r in rows),
                                   pivots, echelon_density(rows)))
    return out


def _row_rank_fraction(rows) -> int:
    work = [list(r) for r in rows]
    m = len(work)
    n = len(work[0])
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if work[i][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = 1 / work[rank][c]
        work[rank] = [x * inv for x in work[rank]]
        for i in range(m):
            if i != rank and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def echelon_decomposition_check(n: int, k: int, f_table: dict) -> bool:
    """Exact check that summing a finite table over no-zero-row k x n
    matrices equals the double sum over echelon forms (without zero
    columns) and independent row tuples.

    Keys of f_table are k-tuples of n-tuples of rationals; values are
    rationals.  The echelon entry pool is derived from ratios of the
    support's maximal minors, which covers every contributing form.
    """
    if k > 3:
        raise DomainError("the exact check is implemented for k <= 3")
    table = {tuple(tuple(Fraction(c) for c in row) for row in key): Fraction(v)
             for key, v in f_table.items()}
    left = Fraction(0)
    for key, v in table.items():
        if all(any(c for c in row) for row in key):
            left += v
    rows_pool = sorted({row for key in table for row in key
                        if any(c for c in row)})
    coords = {c for row in rows_pool for c in row}
    ratio_pool = {p / q for p in coords for q in coords if q != 0}
    minor_vals = set()
    for r1, r2 in itertools.combinations(rows_pool, 2):
        for j1, j2 in itertools.combinations(range(n), 2):
            minor_vals.add(r1[j1] * r2[j2] - r1[j2] * r2[j1])
    minor_ratios = {p / q for p in minor_vals for q in minor_vals if q != 0}
    entry_pool = sorted(ratio_pool | minor_ratios | {Fraction(0)})
    right = Fraction(0)
    for m in range(1, k + 1):
        for pivots in itertools.combinations(range(k), m):
            if pivots[0] != 0:
                continue  # a zero first column would force a zero row
            free = [(i, j) for i in range(m) for j in range(k)
                    if j not in pivots and j > pivots[i]]
            for combo in itertools.product(entry_pool, repeat=len(free)):
                rows = [[Fraction(0)] * k for _ in range(m)]
                for i, p in enumerate(pivots):
                    rows[i][p] = Fraction(1)
                for (i, j), v in zip(free, combo):
                    rows[i][j] = v
                cols = list(zip(*rows))
                if any(not any(col) for col in cols):
                    continue
                for X in itertools.product(rows_pool, repeat=m):
                    if m > 1 and _row_rank_fraction(X) < m:
                        continue
                    Y = tuple(
                        tuple(sum(rows[i][r] * X[i][c] for i in range(m))
                              for c in range(n))
                        for r in range(k))
                    v = table.get(Y)
                    if v:
                        right += v
    return left == right
