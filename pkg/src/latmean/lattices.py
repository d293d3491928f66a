"""Modules over the ring of integers realized as Euclidean lattices.

An O_F-module M of rank n embeds into R^(nd) through the canonical
embedding.  Coordinates are kept three ways: exact integer coordinates
over a Z-basis of M, exact rational coordinates over the standard basis
of O_F^n (the "o-coordinates"), and floating real coordinates.  Inner
products of o-coordinate vectors are exact rationals (trace pairing), so
ball and annulus membership on the boundary is decided exactly.

Layout of R^(nd): place-major.  Real places contribute their n embedded
coordinates; complex places contribute interleaved (sqrt2 * Re,
sqrt2 * Im) pairs, which makes the pushforward of the local measure the
standard Lebesgue measure and the covolume of O_F^n equal |disc|^(n/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, DegeneracyError, DomainError, ResourceLimitError
from .linalg import det_fraction, hnf
from .numberfield import FieldElement, NumberFieldSpec

MAX_ENUM_DIM = 12
MAX_ENUM_POINTS = 6_000_000
_PAD = 1e-9


def ball_volume(k: int) -> float:
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


@dataclass(frozen=True)
class Region:
    """Ball, annulus (centered at the origin), or axis-aligned box."""

    kind: str
    r1: Fraction = Fraction(0)
    r2: Fraction | None = None
    bounds: tuple[tuple[float, float], ...] | None = None
    half_open: bool = False  # sampling convention for boxes

    def __post_init__(self):
        if self.kind in ("ball", "annulus"):
            if self.r2 is None or self.r2 < self.r1 or self.r1 < 0:
                raise ConfigurationError("need radii 0 <= r1 <= r2")
            if self.kind == "ball" and self.r1 != 0:
                raise ConfigurationError("a ball has inner radius 0")
        elif self.kind == "box":
            if not self.bounds:
                raise ConfigurationError("a box needs coordinate bounds")
        else:
            raise ConfigurationError(f"unknown region kind {self.kind!r}")

    @classmethod
    def ball(cls, r) -> "Region":
        return cls("ball", Fraction(0), Fraction(r))

    @classmethod
    def annulus(cls, r1, r2) -> "Region":
        return cls("annulus", Fraction(r1), Fraction(r2))

    @classmethod
    def box(cls, bounds, half_open: bool = False) -> "Region":
        return cls("box", bounds=tuple((float(a), float(b)) for a, b in bounds),
                   half_open=half_open)

    def volume(self, dim: int) -> float:
        if self.kind == "box":
            if len(self.bounds) != dim:
                raise ConfigurationError("box bounds do not match the dimension")
            v = 1.0
            for a, b in self.bounds:
                v *= max(b - a, 0.0)
            return v
        v = ball_volume(dim) * float(self.r2) ** dim
        if self.kind == "annulus":
            v -= ball_volume(dim) * float(self.r1) ** dim
        return v

    def bounding_radius(self) -> float:
        if self.kind == "box":
            return math.sqrt(sum(max(abs(a), abs(b)) ** 2 for a, b in self.bounds))
        return float(self.r2)

    def is_empty(self) -> bool:
        if self.kind == "box":
            return any(b <= a for a, b in self.bounds) if self.half_open else \
                any(b < a for a, b in self.bounds)
        return self.r2 == 0 and self.kind == "annulus" and self.r1 > 0


@dataclass(frozen=True)
class PowerScale:
    """Exact scale factor base^(num/den) applied to region radii."""

    base: int
    num: int
    den: int

    def as_float(self) -> float:
        return float(self.base) ** (self.num / self.den)


def _cmp_scaled(nsq: Fraction, rsq: Fraction, scale: PowerScale | None) -> int:
    """Compare nsq against rsq * scale^2 exactly; returns -1, 0, or 1."""
    if scale is None:
        return (nsq > rsq) - (nsq < rsq)
    lhs = nsq ** scale.den
    rhs = (rsq ** scale.den) * Fraction(scale.base) ** (2 * scale.num)
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class ModuleDescription:
    """Generators of a rank-n module inside F^n, with optional principal
    scales per row."""

    field: NumberFieldSpec
    n: int
    rows: tuple[tuple[FieldElement, ...], ...]
    row_scales: tuple[FieldElement, ...] | None = None
    standard: bool = False  # module equals O_F^n

    @classmethod
    def standard_module(cls, field: NumberFieldSpec, n: int) -> "ModuleDescription":
        one = field.one()
        zero = field.zero()
        rows = tuple(tuple(one if i == j else zero for j in range(n))
                     for i in range(n))
        return cls(field, n, rows, None, True)

    @classmethod
    def from_int_rows(cls, field: NumberFieldSpec, rows) -> "ModuleDescription":
        n = len(rows[0])
        elems = tuple(
            tuple(x if isinstance(x, FieldElement)
                  else field.element(*([x] + [0] * (field.degree - 1)))
                  for x in row)
            for row in rows)
        return cls(field, n, elems)


@dataclass
class LatticePoint:
    z: tuple[int, ...]              # coordinates over the lattice basis
    ocoords: tuple[Fraction, ...]   # coordinates over the standard basis
    real: np.ndarray
    norm_sq: Fraction

    def is_zero(self) -> bool:
        return not any(self.z)


@dataclass
class EmbeddedLattice:
    """Full-rank lattice in R^(nd) with exact Gram data."""

    field: NumberFieldSpec
    n: int
    basis_int: np.ndarray           # dim x dim integer; rows / den = o-coords
    den: int
    gram: list                      # dim x dim Fractions
    real_basis: np.ndarray          # dim x dim float, rows are basis vectors
    covolume_sq: Fraction
    provenance: ModuleDescription
    _chol: np.ndarray | None = dataclass_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.basis_int.shape[0]

    @property
    def covolume(self) -> float:
        return math.sqrt(float(self.covolume_sq))

    def cholesky(self) -> np.ndarray:
        if self._chol is None:
            G = np.array([[float(x) for x in row] for row in self.gram])
            self._chol = np.linalg.cholesky(G)
        return self._chol

    def point_from_z(self, z) -> LatticePoint:
        oc = tuple(Fraction(int(sum(int(zi) * int(b) for zi, b in zip(z, col))), self.den)
                   for col in self.basis_int.T)
        real = np.asarray(z, dtype=float) @ self.real_basis
        nsq = _quadform(self.gram, z)
        return LatticePoint(tuple(int(x) for x in z), oc, real, nsq)

    def point_elements(self, pt: LatticePoint) -> tuple[FieldElement, ...]:
        d = self.field.degree
        return tuple(self.field.element(*pt.ocoords[i * d:(i + 1) * d])
                     for i in range(self.n))


def _quadform(gram, z) -> Fraction:
    nz = [(i, int(v)) for i, v in enumerate(z) if v]
    total = Fraction(0)
    for a, (i, zi) in enumerate(nz):
        total += gram[i][i] * (zi * zi)
        for j, zj in nz[a + 1:]:
            total += 2 * gram[i][j] * (zi * zj)
    return total


def standard_pairing_blocks(field: NumberFieldSpec, n: int):
    """Exact Gram matrix of the standard basis of O_F^n (block diagonal)."""
    P = field.conjugate_pairing()
    d = field.degree
    dim = n * d
    G = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(n):
        for s in range(d):
            for t in range(d):
                G[i * d + s][i * d + t] = P[s][t]
    return G


def standard_real_basis(field: NumberFieldSpec, n: int) -> np.ndarray:
    """Real embedding of the standard basis vectors, place-major layout."""
    d = field.degree
    dim = n * d
    emb = field.embedding_matrix()
    r1, r2 = field.signature
    out = np.zeros((dim, dim))
    for i in range(n):
        for s in range(d):
            vec = np.zeros(dim)
            pos = 0
            for k in range(r1):
                vec[pos + i] = emb[k, s].real
                pos += n
            for k in range(r2):
                z = emb[r1 + 2 * k, s]
                vec[pos + 2 * i] = math.sqrt(2.0) * z.real
                vec[pos + 2 * i + 1] = math.sqrt(2.0) * z.imag
                pos += 2 * n
            out[i * d + s] = vec
    return out


def lattice_from_module(desc: ModuleDescription) -> EmbeddedLattice:
    """Embed the module; covolume = |disc|^(n/2) / finite-place density."""
    field, n = desc.field, desc.n
    d = field.degree
    dim = n * d
    if not (field.is_rational or field.is_quadratic):
        raise ConfigurationError("embedded lattices need an exact base field")
    if field.class_number != 1:
        raise ConfigurationError("pseudo-bases over class number > 1 fields "
                                 "are out of scope")
    basis_elems = [field.one()] + ([field.omega()] if d == 2 else [])
    gen_rows = []
    for ridx, row in enumerate(desc.rows):
        scale = desc.row_scales[ridx] if desc.row_scales else None
        for b in basis_elems:
            vec = []
            for x in row:
                y = x * b
                if scale is not None:
                    y = y * scale
                vec.extend(y.coords)
            gen_rows.append(vec)
    den = 1
    for row in gen_rows:
        for c in row:
            den = math.lcm(den, c.denominator)
    int_rows = [[int(c * den) for c in row] for row in gen_rows]
    H = hnf(int_rows)
    if len(H) < dim:
        raise DegeneracyError("module generators do not have full rank")
    B = np.array(H, dtype=np.int64)
    G0 = standard_pairing_blocks(field, n)
    gram = _basis_gram(B, den, G0)
    cov2 = det_fraction(gram)
    real0 = standard_real_basis(field, n)
    real = (B.astype(float) / den) @ real0
    return EmbeddedLattice(field, n, B, den, gram, real, cov2, desc)


def _basis_gram(B: np.ndarray, den: int, G0) -> list:
    dim = B.shape[0]
    Bl = [[int(x) for x in row] for row in B]
    GB = [[sum(G0[i][k] * Bl[r][k] for k in range(dim) if Bl[r][k])
           for i in range(dim)] for r in range(dim)]
    out = [[Fraction(0)] * dim for _ in range(dim)]
    for r in range(dim):
        for s in range(r, dim):
            v = sum(Bl[s][i] * GB[r][i] for i in range(dim) if Bl[s][i])
            v = Fraction(v, den * den)
            out[r][s] = v
            out[s][r] = v
    return out


def standard_lattice(field: NumberFieldSpec, n: int,
                     scale: FieldElement | None = None) -> EmbeddedLattice:
    """The lattice of O_F^n, optionally scaled by a principal generator."""
    if scale is None or scale == field.one():
        return lattice_from_module(ModuleDescription.standard_module(field, n))
    desc = ModuleDescription.standard_module(field, n)
    rows = tuple(tuple(x * scale for x in row) for row in desc.rows)
    return lattice_from_module(ModuleDescription(field, n, rows, None, False))


def size_reduce(lat: EmbeddedLattice) -> EmbeddedLattice:
    """One pass of lazy size reduction to condition the basis for search."""
    B = lat.real_basis.copy()
    Z = lat.basis_int.astype(object).copy()
    dim = lat.dim
    changed = False
    for i in range(1, dim):
        for j in range(i - 1, -1, -1):
            denom = float(B[j] @ B[j])
            if denom <= 0:
                continue
            mu = round(float(B[i] @ B[j]) / denom)
            if mu:
                B[i] -= mu * B[j]
                Z[i] = [a - mu * b for a, b in zip(Z[i], Z[j])]
                changed = True
    if not changed:
        return lat
    G0 = standard_pairing_blocks(lat.field, lat.n)
    Zi = np.array([[int(x) for x in row] for row in Z], dtype=np.int64)
    gram = _basis_gram(Zi, lat.den, G0)
    real = (Zi.astype(float) / lat.den) @ standard_real_basis(lat.field, lat.n)
    return EmbeddedLattice(lat.field, lat.n, Zi, lat.den, gram, real,
                           lat.covolume_sq, lat.provenance)


def _enumerate_z_in_ball(lat: EmbeddedLattice, radius_sq: float):
    """All integer coordinate vectors z with z G z^T <= radius_sq (float,
    padded); yields lists z."""
    dim = lat.dim
    if dim > MAX_ENUM_DIM:
        raise ResourceLimitError(f"enumeration dimension {dim} exceeds "
                                 f"{MAX_ENUM_DIM}")
    L = lat.cholesky()  # lower triangular, G = L L^T
    C = radius_sq * (1 + 1e-7) + 1e-7
    z = [0] * dim
    partial = [0.0] * (dim + 1)  # partial[k]: sum of v_j^2 for j > k
    offsets = [0.0] * dim
    out = []
    count = 0

    def rec(k: int):
        nonlocal count
        if k < 0:
            out.append(tuple(z))
            count += 1
            if count > MAX_ENUM_POINTS:
                raise ResourceLimitError("enumeration point budget exceeded")
            return
        # v_k = z_k * L[k][k] + sum_{i>k} z_i L[i][k]
        c = sum(z[i] * L[i][k] for i in range(k + 1, dim))
        rem = C - partial[k + 1]
        if rem < 0:
            return
        root = math.sqrt(rem)
        lo = math.ceil((-root - c) / L[k, k] - 1e-12)
        hi = math.floor((root - c) / L[k, k] + 1e-12)
        for zk in range(lo, hi + 1):
            z[k] = zk
            v = zk * L[k, k] + c
            partial[k] = partial[k + 1] + v * v
            if partial[k] <= C:
                rec(k - 1)
        z[k] = 0

    rec(dim - 1)
    return out


def enumerate_points(lat: EmbeddedLattice, region: Region,
                     radial_scale: PowerScale | None = None,
                     reduce_basis: bool = True) -> list[LatticePoint]:
    """Exactly the lattice points in the closed region, each once.

    Ball and annulus membership is decided exactly through the rational
    Gram form (the optional radial_scale multiplies the radii by an exact
    power of an integer).  Boxes use floats with a small pad.
    Deterministic order: sorted by integer coordinates.
    """
    if region.is_empty():
        return []
    work = size_reduce(lat) if reduce_basis else lat
    sf = radial_scale.as_float() if radial_scale else 1.0
    R = region.bounding_radius() * sf
    zs = _enumerate_z_in_ball(work, R * R)
    pts = []
    for z in sorted(zs):
        pt = work.point_from_z(z)
        if _region_contains(region, pt, radial_scale):
            pts.append(pt)
    return pts


def _region_contains(region: Region, pt: LatticePoint,
                     scale: PowerScale | None) -> bool:
    if region.kind == "box":
        pad = _PAD * (1 + float(np.max(np.abs(pt.real))))
        sf = scale.as_float() if scale else 1.0
        for x, (a, b) in zip(pt.real, region.bounds):
            if region.half_open:
                if not (a * sf - pad <= x < b * sf - pad):
                    return False
            else:
                if not (a * sf - pad <= x <= b * sf + pad):
                    return False
        return True
    hi = _cmp_scaled(pt.norm_sq, region.r2 * region.r2, scale)
    if hi > 0:
        return False
    if region.kind == "annulus" and region.r1 > 0:
        lo = _cmp_scaled(pt.norm_sq, region.r1 * region.r1, scale)
        if lo < 0:
            return False
    return True


def is_primitive_point(lat: EmbeddedLattice, pt: LatticePoint) -> bool:
    """Content-ideal triviality of a point of the standard module O_F^n."""
    field = lat.field
    if field.is_rational:
        ints = [int(c) for c in pt.ocoords]
        return math.gcd(*ints) == 1 if any(ints) else False
    elems = [e for e in lat.point_elements(pt) if e]
    if not elems:
        return False
    g = 0
    for e in elems:
        g = math.gcd(g, abs(int(e.norm())))
    if g == 1:
        return True
    from .heights import content_norm
    return content_norm(elems, field) == 1


def count_points(lat: EmbeddedLattice, region: Region, filt: str = "none",
                 radial_scale: PowerScale | None = None) -> int:
    """Number of lattice points in the region under a filter
    (none | nonzero | primitive)."""
    if filt not in ("none", "nonzero", "primitive"):
        raise ConfigurationError(f"unknown filter {filt!r}")
    if filt == "primitive" and not lat.provenance.standard:
        raise ConfigurationError("the primitive filter needs the standard "
                                 "module O_F^n")
    pts = enumerate_points(lat, region, radial_scale)
    if filt == "none":
        return len(pts)
    if filt == "nonzero":
        return sum(1 for p in pts if not p.is_zero())
    return sum(1 for p in pts
               if not p.is_zero() and is_primitive_point(lat, p))


def riemann_sum(lat: EmbeddedLattice, phi, eps: Fraction | float,
                support_radius: float | None = None) -> float:
    """det(eps L) * sum of phi over the points of eps * L.

    phi is a Region (its indicator) or a callable on real coordinates, in
    which case support_radius must bound its support.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("the scale must be positive")
    dim = lat.dim
    det_scaled = float(eps) ** dim * lat.covolume
    if isinstance(phi, Region):
        scaled = _scale_region(phi, 1 / eps)
        return det_scaled * len(enumerate_points(lat, scaled))
    if support_radius is None:
        raise DomainError("a callable needs a bounded support radius")
    ball = Region.ball(Fraction(support_radius) / eps)
    total = 0.0
    for pt in enumerate_points(lat, ball):
        total += phi(pt.real * float(eps))
    return det_scaled * total


def _scale_region(region: Region, factor: Fraction) -> Region:
    if region.kind == "box":
        return Region.box([(float(a * factor), float(b * factor))
                           for a, b in region.bounds], region.half_open)
    if region.kind == "ball":
        return Region.ball(region.r2 * factor)
    return Region.annulus(region.r1 * factor, region.r2 * factor)


def shortest_vector_norm_sq(lat: EmbeddedLattice) -> Fraction:
    """Exact squared length of a shortest nonzero vector (small lattices)."""
    work = size_reduce(lat)
    guess = min(float(work.gram[i][i]) for i in range(work.dim))
    radius_sq = guess * (1 + 1e-9)
    while True:
        zs = _enumerate_z_in_ball(work, radius_sq)
        best = None
        for z in zs:
            if any(z):
                nsq = _quadform(work.gram, z)
                if best is None or nsq < best:
                    best = nsq
        if best is not None:
            return best
        radius_sq *= 2.0
