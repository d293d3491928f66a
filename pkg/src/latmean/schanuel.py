"""Projective point counts, their leading constant, and unit-sum bounds.

Projective points of bounded twisted height are counted through the
one-to-w correspondence with primitive integral vectors whose log-vector
lies in a fixed half-open fundamental domain of the unit lattice.  Over
the exactly-supported fields (rationals, quadratics) with no twist, every
membership decision (height bound, domain membership, primitivity) is an
exact rational comparison, so the counts carry no floating-point fuzz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError
from .heights import content_norm
from .lattices import Region, ball_volume, enumerate_points, standard_lattice
from .numberfield import (
    FieldElement,
    NumberFieldSpec,
    dedekind_zeta,
    embed,
    log_embed,
)


@dataclass(frozen=True)
class ProjectiveCountConfig:
    """Field, rank, height bound, optional archimedean twist with
    height-norm determinant one."""

    field: NumberFieldSpec
    n: int
    bound: float
    twist: tuple | None = None  # one n x n array per infinite place

    def __post_init__(self):
        if self.field.class_number != 1:
            raise ConfigurationError("projective counting needs class "
                                     "number one")
        if self.n < 2:
            raise DomainError("need n >= 2")
        if self.twist is not None:
            prod = 1.0
            for k, g in enumerate(self.twist):
                d = abs(np.linalg.det(np.asarray(g)))
                prod *= d if k < self.field.r1 else d * d
            if abs(prod - 1.0) > 1e-9:
                raise ConfigurationError("twist determinant norms must "
                                         "multiply to 1")


def _sign_sigma1(z: FieldElement) -> int:
    """Exact sign of the first real embedding of a quadratic element."""
    f = z.field
    a, b = z.coords
    if f.half:
        u, v = a + b / 2, b / 2
    else:
        u, v = a, b
    m = f.m
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return (v > 0) - (v < 0)
    if u > 0 and v > 0:
        return 1
    if u < 0 and v < 0:
        return -1
    lhs = u * u
    rhs = v * v * m
    if v < 0:  # positive iff u > |v| sqrt(m)
        return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
    return 1 if lhs < rhs else (-1 if lhs > rhs else 0)


def _exact_height_sq(elems) -> Fraction:
    """N(sum x_i^2) for totally real fields; (sum N(x_i))^2 over an
    imaginary quadratic field; sum x_i^2 squared over Q.  Returns H^2."""
    field = elems[0].field
    if field.is_rational:
        s = sum(x.coords[0] ** 2 for x in elems)
        return s
    if field.m < 0:
        h = sum(x.norm() for x in elems)
        return h * h
    s = field.zero()
    for x in elems:
        s = s + x * x
    return s.norm()


def _domain_position_ok(field: NumberFieldSpec, elems) -> bool:
    """Exact half-open fundamental-domain test for unit rank <= 1
    (untwisted): the projected log-vector lies in [0, 1) times the
    fundamental-unit log direction."""
    if field.unit_rank == 0:
        return True
    s = field.zero()
    for x in elems:
        s = s + x * x
    eps = field.units()[0]
    if _sign_sigma1(s.conjugate() - s) > 0:
        return False  # sigma1(s) < sigma2(s): t < 0
    e4 = eps ** 4
    z = s - e4 * s.conjugate()
    return _sign_sigma1(z) < 0


def count_projective_points(cfg: ProjectiveCountConfig) -> int:
    """Number of projective classes of twisted height at most the bound.

    Counts primitive integral vectors with the log-vector normalized into
    the half-open fundamental domain and divides exactly by the number of
    roots of unity.
    """
    field, n = cfg.field, cfg.n
    if cfg.twist is None and (field.is_rational or field.is_quadratic):
        return _count_projective_exact(field, n, Fraction(cfg.bound))
    return _count_projective_float(cfg)


def _enum_radius_sq(field: NumberFieldSpec, B: float) -> float:
    if field.is_rational:
        return B * B
    if field.m < 0:
        return 2 * B
    eps1 = abs(embed(field.units()[0], field)[0])
    return B * (eps1 * eps1 + 1)


def _count_projective_exact(field: NumberFieldSpec, n: int, B: Fraction) -> int:
    if B <= 0:
        return 0
    if field.is_rational:
        return _count_projective_rational(n, B)
    lat = standard_lattice(field, n)
    radius_sq = _enum_radius_sq(field, float(B)) * (1 + 1e-9) + 1e-9
    pts = enumerate_points(lat, Region.ball(Fraction(math.sqrt(radius_sq))))
    B2 = B * B
    w = field.roots_of_unity
    count = 0
    for pt in pts:
        if pt.is_zero():
            continue
        elems = lat.point_elements(pt)
        if _exact_height_sq(elems) > B2:
            continue
        if not _is_primitive_vector(field, elems):
            continue
        if not _domain_position_ok(field, elems):
            continue
        count += 1
    if count % w:
        raise PreconditionError("count not divisible by the root-of-unity "
                                "order; domain test is inconsistent")
    return count // w


def _count_projective_rational(n: int, B: Fraction) -> int:
    """Vectorized grid count of primitive integer vectors in the ball,
    halved (the two roots of unity)."""
    R = math.isqrt(int(B * B))  # |x_i| <= floor(sqrt(B^2)) since x integral
    row = np.arange(-R, R + 1, dtype=np.int64)
    B2 = int(B * B)  # exact for integer vectors: ssq <= B^2 iff ssq <= floor(B^2)
    count = 0
    grids = np.meshgrid(*([row] * (n - 1)), indexing="ij")
    gtail = np.abs(grids[0])
    for gr in grids[1:]:
        gtail = np.gcd(gtail, np.abs(gr))
    ssq_tail = sum(gr.astype(np.int64) ** 2 for gr in grids)
    for x0 in range(-R, R + 1):
        mask = ssq_tail + x0 * x0 <= B2
        g = np.gcd(abs(x0), gtail)
        count += int(np.count_nonzero(mask & (g == 1)))
    if count % 2:
        raise PreconditionError("primitive grid count must be even")
    return count // 2


def _is_primitive_vector(field: NumberFieldSpec, elems) -> bool:
    nz = [e for e in elems if e]
    if not nz:
        return False
    if field.is_rational:
        return math.gcd(*(abs(int(e.coords[0])) for e in elems)) == 1
    g = 0
    for e in nz:
        g = math.gcd(g, abs(int(e.norm())))
    if g == 1:
        return True
    return content_norm(nz, field) == 1


def _count_projective_float(cfg: ProjectiveCountConfig) -> int:
    """Twisted counting: float height/log tests with a tiny pad."""
    field, n, B = cfg.field, cfg.n, float(cfg.bound)
    if not (field.is_rational or field.is_quadratic):
        raise ConfigurationError("projective counting needs an exactly "
                                 "supported field")
    if B <= 0:
        return 0
    twist = [np.asarray(g, dtype=complex if k >= field.r1 else float)
             for k, g in enumerate(cfg.twist)] if cfg.twist else None
    r1, r2 = field.signature
    places = r1 + r2
    lam = None
    if field.unit_rank == 1:
        lam = math.log(abs(embed(field.units()[0], field)[0]))
    # per-place caps on the local height of x*g, then pull back through g
    cap_log = (math.log(B) if B > 1 else math.log(B)) / places
    caps = []
    for k in range(places):
        extra = 2 * lam if (lam is not None and k == 0) else 0.0
        caps.append(math.exp(cap_log + extra + 1e-9))
    smin = [1.0] * places
    if twist is not None:
        for k, g in enumerate(twist):
            s = np.linalg.svd(g, compute_uv=False)[-1]
            smin[k] = s if k < r1 else s * s
    metric_sq = 0.0
    for k in range(places):
        c = caps[k] / smin[k]
        metric_sq += c * c if k < r1 else 2 * c
    lat = standard_lattice(field, n)
    pts = enumerate_points(lat, Region.ball(Fraction(math.sqrt(metric_sq) * (1 + 1e-9))))
    w = field.roots_of_unity
    count = 0
    for pt in pts:
        if pt.is_zero():
            continue
        elems = lat.point_elements(pt)
        if not _is_primitive_vector(field, elems):
            continue
        hs = _twisted_place_heights(field, elems, twist)
        H = math.prod(hs)
        if H > B * (1 + 1e-12):
            continue
        if lam is not None:
            t = (math.log(hs[0]) - math.log(hs[1])) / (2 * lam)
            if not (0.0 <= t < 1.0):
                continue
        count += 1
    if count % w:
        raise PreconditionError("count not divisible by the root-of-unity "
                                "order")
    return count // w


def _twisted_place_heights(field, elems, twist):
    r1, r2 = field.signature
    vecs = [np.array([embed(e, field)[k] for e in elems])
            for k in range(r1 + r2)]
    out = []
    for k, v in enumerate(vecs):
        if twist is not None:
            v = v @ twist[k]
        nrm = float(np.linalg.norm(v))
        out.append(nrm if k < r1 else nrm * nrm)
    return out


def projective_count_oracle(field: NumberFieldSpec, n: int, B: Fraction) -> int:
    """Independent count: distinct field-lines whose height is at most B.

    Heights are constant on lines, so deduplicating enumerated points by
    their canonical line representative counts projective classes without
    any fundamental-domain bookkeeping.
    """
    lat = standard_lattice(field, n)
    radius_sq = _enum_radius_sq(field, float(B)) * (1 + 1e-9) + 1e-9
    pts = enumerate_points(lat, Region.ball(Fraction(math.sqrt(radius_sq))))
    B2 = Fraction(B) ** 2
    lines = set()
    for pt in pts:
        if pt.is_zero():
            continue
        elems = lat.point_elements(pt)
        if _exact_height_sq(elems) > B2:
            continue
        if not _is_primitive_vector(field, elems):
            continue
        lead = next(e for e in elems if e)
        inv = lead.inverse()
        lines.add(tuple((e * inv).coords for e in elems))
    return len(lines)


def schanuel_constant(field: NumberFieldSpec, n: int) -> float:
    """Leading coefficient C with (projective count up to B) ~ C B^n.

    The unit-lattice factor enters through the volume of the fundamental
    cell projected onto r of the r1+r2 log coordinates, which is the
    stored ambient-metric covolume divided by sqrt(r1+r2).  (The two
    normalizations agree whenever r1+r2 = 1; the division is confirmed by
    the counting oracle over real quadratic fields, where the ratio of
    count to C B^n converges to 1 only with it.)
    """
    if n < 2:
        raise DomainError("need n >= 2")
    r1, r2 = field.signature
    z = dedekind_zeta(field, n)
    projected_reg = field.regulator / math.sqrt(r1 + r2)
    num = (ball_volume(n) ** r1 * ball_volume(2 * n) ** r2
           * n ** (r1 + r2 - 1) * 2.0 ** (n * r2)
           * field.class_number * projected_reg)
    den = abs(field.discriminant) ** (n / 2) * z.value * field.roots_of_unity
    return num / den


# ---------------------------------------------------------------------------
# unit counting


@dataclass(frozen=True)
class UnitCountQuery:
    """Count units u (up to roots of unity) whose translated log-vector
    has largest coordinate in the interval; default (-inf, k]."""

    gamma: FieldElement
    k: float
    interval: tuple | None = None


def unit_count(query: UnitCountQuery, field: NumberFieldSpec) -> int:
    if not query.gamma:
        raise DomainError("need a nonzero translate")
    if query.interval is not None:
        lo, hi = query.interval
        return (unit_count(UnitCountQuery(query.gamma, hi), field)
                - unit_count(UnitCountQuery(query.gamma, lo), field))
    k = float(query.k)
    base = log_embed(query.gamma, field)
    r = field.unit_rank
    if r == 0:
        return 1 if max(base) <= k else 0
    if r == 1:
        lam_vec = log_embed(field.units()[0], field)
        lam = max(lam_vec)
        a1 = base[lam_vec.index(lam)]
        a2 = base[1 - lam_vec.index(lam)]
        hi = math.floor((k - a1) / lam)
        lo = math.ceil((a2 - k) / lam)
        return max(0, hi - lo + 1)
    return _unit_count_general(query.gamma, k, field)


def _unit_count_general(gamma, k, field) -> int:
    units = field.units()
    r = len(units)
    logs = [np.array(log_embed(u, field)) for u in units]
    base = np.array(log_embed(gamma, field))
    places = field.r1 + field.r2
    c = float(base.sum())
    if places * k < c - 1e-12:
        return 0
    span = max(abs(k), abs(c - (places - 1) * k)) + 1
    count = 0
    B = max(int(span / max(np.abs(l).max() for l in logs)) + 2, 2)
    import itertools as _it
    for js in _it.product(range(-B, B + 1), repeat=r):
        v = base + sum(j * l for j, l in zip(js, logs))
        if v.max() <= k + 1e-12:
            count += 1
    return count


def asymptotic_unit_count(query: UnitCountQuery, field: NumberFieldSpec) -> float:
    """Leading simplex-volume term of the unit count."""
    if not query.gamma:
        raise DomainError("need a nonzero translate")
    if query.interval is not None:
        lo, hi = query.interval
        return (asymptotic_unit_count(UnitCountQuery(query.gamma, hi), field)
                - asymptotic_unit_count(UnitCountQuery(query.gamma, lo), field))
    r = field.unit_rank
    k = float(query.k)
    lognorm = math.log(abs(float(query.gamma.norm()))) if \
        (field.is_rational or field.is_quadratic) else \
        sum(log_embed(query.gamma, field))
    arg = (r + 1) * k - lognorm
    if arg < 0:
        return 0.0
    if r == 0:
        return 1.0
    return (math.sqrt(r + 1) / math.factorial(r)) * arg**r / field.regulator


# ---------------------------------------------------------------------------
# annulus overlap estimates


@dataclass(frozen=True)
class OverlapReport:
    estimate: float
    bound: float
    std_error: float
    volume: float
    passed: bool


def _gamma_place_norms(field: NumberFieldSpec, gamma: FieldElement) -> list[float]:
    vals = embed(gamma, field)
    out = []
    for k, v in enumerate(vals):
        a = abs(v)
        out.append(a if k < field.r1 else a * a)
    return out


def _apply_gamma(field: NumberFieldSpec, n: int, X: np.ndarray,
                 gamma: FieldElement) -> np.ndarray:
    """Multiply sampled archimedean vectors by gamma, place-major layout."""
    vals = embed(gamma, field)
    r1, r2 = field.signature
    Y = np.empty_like(X)
    pos = 0
    for k in range(r1):
        Y[:, pos:pos + n] = X[:, pos:pos + n] * vals[k]
        pos += n
    for k in range(r2):
        z = vals[r1 + k]
        a, b = z.real, z.imag
        blk = X[:, pos:pos + 2 * n]
        re = blk[:, 0::2]
        im = blk[:, 1::2]
        Y[:, pos:pos + 2 * n:2] = a * re - b * im
        Y[:, pos + 1:pos + 2 * n:2] = b * re + a * im
        pos += 2 * n
    return Y


def _sample_annulus(rng, count, dim, r1, r2):
    X = rng.standard_normal((count, dim))
    X /= np.linalg.norm(X, axis=1)[:, None]
    u = rng.random(count)
    radii = (r1**dim + u * (r2**dim - r1**dim)) ** (1.0 / dim)
    return X * radii[:, None]


def annulus_overlap_check(field: NumberFieldSpec, n: int, r1, r2,
                          gamma: FieldElement, samples: int = 10**6,
                          seed: int = 42) -> OverlapReport:
    """Monte Carlo estimate of the overlap integral of an annulus with its
    gamma-multiple against the closed scaling bound; passes when the
    estimate minus three standard errors stays below the bound."""
    if field.degree < 2:
        raise DomainError("the overlap bound concerns degree >= 2")
    if not gamma:
        raise DomainError("need a nonzero multiplier")
    if samples < 10**4:
        raise PreconditionError("need at least 1e4 samples for a stable "
                                "standard error")
    d = field.degree
    dim = n * d
    lo, hi = float(r1), float(r2)
    if not 0 <= lo < hi:
        raise DomainError("need radii 0 <= r1 < r2")
    vol = ball_volume(dim) * (hi**dim - lo**dim)
    rng = np.random.default_rng(seed)
    X = _sample_annulus(rng, samples, dim, lo, hi)
    Y = _apply_gamma(field, n, X, gamma)
    nrm = np.einsum("ij,ij->i", Y, Y)
    hits = int(np.count_nonzero((nrm >= lo * lo) & (nrm <= hi * hi)))
    phat = hits / samples
    est = vol * phat
    se = vol * math.sqrt(max(phat * (1 - phat), 1e-12) / samples)
    amin = min(1.0 / v for v in _gamma_place_norms(field, gamma))
    bound = vol * min(1.0, d * math.e * amin) ** n
    return OverlapReport(est, bound, se, vol, est - 3 * se <= bound)


@dataclass(frozen=True)
class UnitSumReport:
    partial_sums: tuple[float, ...]
    tail_bound: float
    terms: tuple[float, ...]

    def stabilization_index(self, tol: float) -> int:
        final = self.partial_sums[-1]
        for i, s in enumerate(self.partial_sums):
            if all(abs(t) <= tol for t in self.terms[i + 1:]):
                if abs(s - final) <= tol * max(1, len(self.terms)):
                    return i
        return len(self.partial_sums) - 1


def unit_sum_convergence(field: NumberFieldSpec, n: int, gamma: FieldElement,
                         region: Region, m_terms: int,
                         samples: int = 10**5, seed: int = 7) -> UnitSumReport:
    """Partial sums over units (ordered by the power of the fundamental
    unit) of the overlap estimates, with a geometric bound on the
    discarded tail.  Real quadratic fields only."""
    if field.unit_rank != 1 or field.m is None or field.m < 0:
        raise ConfigurationError("unit sums are exercised over real "
                                 "quadratic fields")
    if region.kind not in ("ball", "annulus"):
        raise DomainError("need a ball or an annulus")
    if not gamma:
        raise DomainError("need a nonzero multiplier")
    d = field.degree
    dim = n * d
    lo, hi = float(region.r1), float(region.r2)
    vol = ball_volume(dim) * (hi**dim - lo**dim)
    eps = field.units()[0]
    rng = np.random.default_rng(seed)
    if vol == 0:
        zeros = tuple(0.0 for _ in range(m_terms + 1))
        return UnitSumReport(zeros, 0.0, zeros)
    X = _sample_annulus(rng, samples, dim, lo, hi)

    def overlap(mult: FieldElement) -> float:
        norms = _gamma_place_norms(field, mult)
        amin = min(1.0 / v for v in norms)
        if d * math.e * amin < 1e-9:
            return 0.0
        Y = _apply_gamma(field, n, X, mult)
        nrm = np.einsum("ij,ij->i", Y, Y)
        hits = int(np.count_nonzero((nrm >= lo * lo) & (nrm <= hi * hi)))
        return vol * hits / samples

    terms = [2.0 * overlap(gamma)]
    for j in range(1, m_terms + 1):
        t = 2.0 * overlap(gamma * eps**j) + 2.0 * overlap(gamma * eps**(-j))
        terms.append(t)
    partial = []
    acc = 0.0
    for t in terms:
        acc += t
        partial.append(acc)
    eps1 = abs(embed(eps, field)[0])
    gmin = min(_gamma_place_norms(field, gamma))
    ratio = eps1 ** (-n)
    lead = 4 * vol * (d * math.e / gmin) ** n * ratio ** (m_terms + 1)
    tail = lead / (1 - ratio)
    return UnitSumReport(tuple(partial), tail, tuple(terms))
