"""Exact arithmetic and invariants for the base field.

Supported exactly: the rationals and quadratic fields Q(sqrt m) of class
number one.  Elements are coordinate vectors over the integral basis
{1} or {1, w} with w = sqrt(m) or (1 + sqrt(m))/2, so all algebraic
identities (norms, traces, inner products of embedded vectors) are exact
rationals; floating point enters only through the embeddings themselves.

Other fields can be loaded from a key-value spec file; they support the
numeric operations (embeddings, logs, archimedean heights) but not the
exact ideal arithmetic, which is out of scope.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    ConfigurationError,
    DomainError,
    IntegrityError,
    ResourceLimitError,
)

DEFAULT_PRIME_BOUND = 10**6

# Imaginary quadratic fields of class number one (complete list).
_IMAGINARY_H1 = {-1, -2, -3, -7, -11, -19, -43, -67, -163}


def _squarefree(m: int) -> bool:
    d = 2
    mm = abs(m)
    while d * d <= mm:
        if mm % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class NumberFieldSpec:
    """Immutable description of the base field."""

    label: str
    degree: int
    signature: tuple[int, int]
    discriminant: int
    class_number: int
    roots_of_unity: int
    regulator: float
    fundamental_units: tuple[tuple[Fraction, ...], ...]
    m: int | None = None            # quadratic radicand (squarefree), None for Q
    half: bool = False              # integral basis {1, (1+sqrt m)/2}
    embedding_table: tuple[tuple[complex, ...], ...] | None = None  # user fields

    @property
    def r1(self) -> int:
        return self.signature[0]

    @property
    def r2(self) -> int:
        return self.signature[1]

    @property
    def unit_rank(self) -> int:
        return self.r1 + self.r2 - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def is_quadratic(self) -> bool:
        return self.degree == 2 and self.m is not None

    @property
    def omega_trace(self) -> int:
        return 1 if self.half else 0

    @property
    def omega_norm(self) -> int:
        assert self.m is not None
        return (1 - self.m) // 4 if self.half else -self.m

    def element(self, *coords) -> "FieldElement":
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != self.degree:
            raise ConfigurationError(
                f"element of {self.label} needs {self.degree} coordinates")
        return FieldElement(self, cs)

    def zero(self) -> "FieldElement":
        return self.element(*([0] * self.degree))

    def one(self) -> "FieldElement":
        return self.element(*([1] + [0] * (self.degree - 1)))

    def omega(self) -> "FieldElement":
        if self.degree < 2:
            raise ConfigurationError("the rational field has no generator w")
        return self.element(*([0, 1] + [0] * (self.degree - 2)))

    def units(self) -> tuple["FieldElement", ...]:
        return tuple(FieldElement(self, u) for u in self.fundamental_units)

    def basis_descriptors(self) -> tuple[str, ...]:
        if self.is_rational:
            return ("1",)
        if self.is_quadratic:
            return ("1", f"(1+sqrt({self.m}))/2" if self.half else f"sqrt({self.m})")
        return tuple(f"b{i}" for i in range(self.degree))

    def embedding_matrix(self) -> np.ndarray:
        """All `degree` embeddings of the integral basis (complex matrix)."""
        if self.embedding_table is not None:
            rows = [list(r) for r in self.embedding_table]
            full = rows[: self.r1]
            for r in rows[self.r1:]:
                full.append(r)
                full.append([z.conjugate() for z in r])
            return np.array(full, dtype=complex)
        if self.is_rational:
            return np.array([[1.0]], dtype=complex)
        s = math.sqrt(abs(self.m)) * (1 if self.m > 0 else 1j)
        w1 = (1 + s) / 2 if self.half else s
        w2 = (1 - s) / 2 if self.half else -s
        return np.array([[1, w1], [1, w2]], dtype=complex)

    def conjugate_pairing(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix of the integral basis under sum_i s_i(x) conj(s_i(y)).

        Exact: equals Tr(x * y) for totally real fields and Tr(x * ybar)
        for imaginary quadratic ones.
        """
        if self.is_rational:
            return ((Fraction(1),),)
        if not self.is_quadratic:
            raise ConfigurationError(
                "exact pairing requires the rational or a quadratic field")
        one = self.one()
        w = self.omega()
        basis = (one, w)

        def pair(x, y):
            yc = y.conjugate() if self.m < 0 else y
            return (x * yc).trace()

        return tuple(tuple(pair(a, b) for b in basis) for a in basis)


@dataclass(frozen=True)
class FieldElement:
    """Element of the field in exact coordinates over the integral basis."""

    field: NumberFieldSpec
    coords: tuple[Fraction, ...]

    def _like(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field.label != self.field.label:
                raise ConfigurationError("elements of different fields")
            return other
        return FieldElement(
            self.field,
            tuple([Fraction(other)] + [Fraction(0)] * (self.field.degree - 1)),
        )

    def __add__(self, other):
        o = self._like(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._like(other))

    def __rsub__(self, other):
        return self._like(other) - self

    def __mul__(self, other):
        o = self._like(other)
        f = self.field
        if f.degree == 1:
            return FieldElement(f, (self.coords[0] * o.coords[0],))
        if f.is_quadratic:
            a0, a1 = self.coords
            b0, b1 = o.coords
            t, nm = f.omega_trace, f.omega_norm
            return FieldElement(f, (a0 * b0 - a1 * b1 * nm,
                                    a0 * b1 + a1 * b0 + a1 * b1 * t))
        raise ConfigurationError(
            "multiplication needs the rational or a quadratic field")

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElement":
        f = self.field
        if f.degree == 1:
            return self
        if f.is_quadratic:
            a0, a1 = self.coords
            return FieldElement(f, (a0 + a1 * f.omega_trace, -a1))
        raise ConfigurationError("conjugation needs a quadratic field")

    def norm(self) -> Fraction:
        f = self.field
        if f.degree == 1:
            return self.coords[0]
        if f.is_quadratic:
            a0, a1 = self.coords
            return a0 * a0 + a0 * a1 * f.omega_trace + a1 * a1 * f.omega_norm
        raise ConfigurationError("exact norm needs a quadratic field")

    def trace(self) -> Fraction:
        f = self.field
        if f.degree == 1:
            return self.coords[0]
        if f.is_quadratic:
            a0, a1 = self.coords
            return 2 * a0 + a1 * f.omega_trace
        raise ConfigurationError("exact trace needs a quadratic field")

    def inverse(self) -> "FieldElement":
        if not self:
            raise DomainError("division by zero")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coords[0],))
        n = self.norm()
        c = self.conjugate()
        return FieldElement(self.field, tuple(x / n for x in c.coords))

    def __truediv__(self, other):
        return self * self._like(other).inverse()

    def __rtruediv__(self, other):
        return self._like(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return any(self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __repr__(self):
        names = self.field.basis_descriptors()
        parts = [f"{c}*{n}" if n != "1" else f"{c}"
                 for c, n in zip(self.coords, names) if c]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PrimeIdealData:
    """A degree-one principal prime: residue norm, generator, base prime."""

    residue_norm: int
    generator: FieldElement
    rational_prime: int
    splitting_type: str
    omega_residue: int | None = None

    @property
    def q(self) -> int:
        return self.residue_norm


# ---------------------------------------------------------------------------
# field constructors


_FIELD_CACHE: dict = {}


def rational_field() -> NumberFieldSpec:
    if "Q" not in _FIELD_CACHE:
        _FIELD_CACHE["Q"] = NumberFieldSpec(
            label="Q", degree=1, signature=(1, 0), discriminant=1,
            class_number=1, roots_of_unity=2, regulator=1.0,
            fundamental_units=())
    return _FIELD_CACHE["Q"]


def quadratic_field(m: int) -> NumberFieldSpec:
    """The field Q(sqrt m) for squarefree m, verified to have class number 1."""
    if m in _FIELD_CACHE:
        return _FIELD_CACHE[m]
    if m in (0, 1) or not _squarefree(m):
        raise ConfigurationError(f"radicand must be squarefree and not 0/1: {m}")
    half = m % 4 == 1
    disc = m if half else 4 * m
    if m > 0:
        signature = (2, 0)
        w = 2
    else:
        if m not in _IMAGINARY_H1:
            raise ConfigurationError(
                f"Q(sqrt {m}) has class number > 1; supply a spec file instead")
        signature = (0, 1)
        w = 4 if m == -1 else (6 if m == -3 else 2)
    label = f"Q(sqrt{m})" if m != -1 else "Q(i)"
    spec = NumberFieldSpec(
        label=label, degree=2, signature=signature, discriminant=disc,
        class_number=1, roots_of_unity=w, regulator=1.0,
        fundamental_units=(), m=m, half=half)
    if m > 0:
        eps = _fundamental_unit(spec)
        assert abs(eps.norm()) == 1
        lam = math.log(abs(_embed_real(eps, spec, 0)))
        spec = NumberFieldSpec(
            label=label, degree=2, signature=signature, discriminant=disc,
            class_number=1, roots_of_unity=w,
            regulator=math.sqrt(2.0) * lam,
            fundamental_units=(eps.coords,), m=m, half=half)
    _verify_class_number_one(spec)
    _FIELD_CACHE[m] = spec
    return spec


def parse_field(label: str) -> NumberFieldSpec:
    """Parse labels like "Q", "Q(i)", "Q(sqrt2)", "Q(sqrt -7)"."""
    s = label.strip()
    if s in ("Q", "QQ"):
        return rational_field()
    if s.replace(" ", "") in ("Q(i)", "Q(I)"):
        return quadratic_field(-1)
    mt = re.fullmatch(r"Q\(\s*sqrt\s*\(?\s*(-?\d+)\s*\)?\s*\)", s)
    if mt:
        return quadratic_field(int(mt.group(1)))
    raise ConfigurationError(f"unrecognized field label: {label!r}")


def _embed_real(x: FieldElement, field: NumberFieldSpec, place: int) -> float:
    vals = embed(x, field)
    return vals[place]


def _fundamental_unit(field: NumberFieldSpec) -> FieldElement:
    """Fundamental unit of a real quadratic field via the continued fraction
    of the basis generator w; normalized so its first embedding exceeds 1."""
    m = field.m
    t = field.omega_trace
    # w = (P0 + sqrt m)/Q0
    P, Q = (1, 2) if field.half else (0, 1)
    SCALE = 1 << 64
    sqrt_scaled = math.isqrt(m * SCALE * SCALE)

    def floor_surd(P, Q):
        # Python floor division handles either sign of Q; the 2^-64 slack in
        # sqrt_scaled cannot straddle an integer for desk-scale radicands.
        return (P * SCALE + sqrt_scaled) // (Q * SCALE)

    h_prev, h_cur = 1, floor_surd(P, Q)
    k_prev, k_cur = 0, 1
    a = h_cur
    P, Q = a * Q - P, (m - (a * Q - P) ** 2) // Q
    for _ in range(100000):
        # candidate unit h - k * conj(w) = (h - k*t) + k*w
        cand = field.element(h_cur - k_cur * t, k_cur)
        if abs(cand.norm()) == 1:
            u = cand
            s1 = 1.0 * u.coords[0] + u.coords[1] * (
                (1 + math.sqrt(m)) / 2 if field.half else math.sqrt(m))
            if abs(s1) < 1:
                u = u.inverse()
                s1 = 1 / s1
            if s1 < 0:
                u = -u
            return u
        a = floor_surd(P, Q)
        h_prev, h_cur = h_cur, a * h_cur + h_prev
        k_prev, k_cur = k_cur, a * k_cur + k_prev
        P = a * Q - P
        Q = (m - P * P) // Q
    raise ResourceLimitError(f"continued fraction of sqrt({m}) found no unit")


def _verify_class_number_one(field: NumberFieldSpec) -> None:
    """Check every prime ideal below the Minkowski bound is principal."""
    if field.is_rational:
        return
    disc = abs(field.discriminant)
    bound = (2 / math.pi) * math.sqrt(disc) if field.m < 0 else 0.5 * math.sqrt(disc)
    p = 2
    while p <= bound:
        if _is_prime(p):
            st = splitting_type(field, p)
            if st in ("split", "ramified") and solve_norm_equation(field, p) is None:
                raise ConfigurationError(
                    f"{field.label}: prime of norm {p} is not principal "
                    "(class number exceeds 1)")
        p += 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


# ---------------------------------------------------------------------------
# operations


def embed(x: FieldElement, field: NumberFieldSpec | None = None):
    """Canonical embedding: r1 real values followed by r2 complex values
    (one per conjugate pair)."""
    field = field or x.field
    if field.embedding_table is not None:
        rows = field.embedding_table
        vals = [sum(complex(z) * float(c) for z, c in zip(row, x.coords))
                for row in rows]
        return tuple(v.real if i < field.r1 else v
                     for i, v in enumerate(vals))
    if field.is_rational:
        return (float(x.coords[0]),)
    if not field.is_quadratic:
        raise ConfigurationError(f"no embedding data for field {field.label}")
    a0, a1 = float(x.coords[0]), float(x.coords[1])
    if field.m > 0:
        s = math.sqrt(field.m)
        w1, w2 = ((1 + s) / 2, (1 - s) / 2) if field.half else (s, -s)
        return (a0 + a1 * w1, a0 + a1 * w2)
    s = math.sqrt(-field.m)
    w = complex(0.5, s / 2) if field.half else complex(0, s)
    return (complex(a0, 0) + a1 * w,)


def embed_norm_sq(x: FieldElement) -> Fraction:
    """Exact squared length of the embedded element, conjugates included."""
    f = x.field
    if f.degree == 1:
        return x.coords[0] ** 2
    y = x.conjugate() if f.m < 0 else x
    return (x * y).trace()


def log_embed(x: FieldElement, field: NumberFieldSpec | None = None):
    """Coordinates log|s(x)| per real place and 2 log|s(x)| per complex one."""
    field = field or x.field
    if not x:
        raise DomainError("log embedding of zero")
    vals = embed(x, field)
    out = []
    for i, v in enumerate(vals):
        if i < field.r1:
            out.append(math.log(abs(v)))
        else:
            out.append(2.0 * math.log(abs(v)))
    return tuple(out)


def norms(x: FieldElement, field: NumberFieldSpec | None = None) -> Fraction:
    """Exact field norm; the ideal norm of (x) is its absolute value."""
    if not x:
        raise DomainError("norm of zero has no valuation data")
    return x.norm()


def ideal_norm(x: FieldElement) -> Fraction:
    return abs(norms(x))


def discriminant(field: NumberFieldSpec) -> int:
    """Stored discriminant, cross-checked against det of the embedding matrix."""
    M = field.embedding_matrix()
    approx = np.linalg.det(M) ** 2
    if abs(approx.imag) > 1e-6 * (1 + abs(approx)) or \
            abs(approx.real - field.discriminant) > 1e-6 * (1 + abs(approx)):
        raise IntegrityError(
            f"discriminant mismatch for {field.label}: stored "
            f"{field.discriminant}, embeddings give {approx:.6f}")
    return field.discriminant


@dataclass(frozen=True)
class UnitGroup:
    fundamental_units: tuple[FieldElement, ...]
    regulator: float
    roots_of_unity: int


def unit_group(field: NumberFieldSpec) -> UnitGroup:
    return UnitGroup(field.units(), field.regulator, field.roots_of_unity)


def kronecker_symbol(a: int, p: int) -> int:
    """Kronecker symbol (a|p) for p prime."""
    if p == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 in (1, 7) else -1
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def splitting_type(field: NumberFieldSpec, p: int) -> str:
    if field.is_rational:
        return "split"
    if not field.is_quadratic:
        raise ConfigurationError("splitting data needs a quadratic field")
    d = field.discriminant
    if d % p == 0:
        return "ramified"
    return "split" if kronecker_symbol(d, p) == 1 else "inert"


def solve_norm_equation(field: NumberFieldSpec, p: int) -> FieldElement | None:
    """An integral element of norm +-p, or None if none exists."""
    t, nm = field.omega_trace, field.omega_norm
    m = field.m
    if m < 0:
        bmax = math.isqrt(4 * p // abs(m)) + 2
        targets = (p,)
    else:
        eps = abs(_embed_real(field.units()[0], field, 0)) if field.fundamental_units \
            else abs(_embed_real(_fundamental_unit(field), field, 0))
        bmax = math.isqrt(int(4 * p * eps / m)) + 2
        targets = (p, -p)
    for b in range(0, bmax + 1):
        for tgt in targets:
            # a^2 + a*b*t + b^2*nm = tgt
            disc = b * b * t * t - 4 * (b * b * nm - tgt)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            for sgn in (1, -1):
                num = -b * t + sgn * r
                if num % 2 == 0:
                    return field.element(num // 2, b)
    return None


def split_principal_primes(field: NumberFieldSpec, coprime_to, count: int,
                           norm_bound: int = DEFAULT_PRIME_BOUND,
                           min_norm: int = 2) -> list[PrimeIdealData]:
    """Degree-one principal split primes in ascending residue norm.

    Each returned prime carries an exact generator, avoids the rational
    primes in `coprime_to`, and (for quadratic fields) splits completely.
    """
    if count < 1:
        raise DomainError("count must be positive")
    avoid = {int(c) for c in coprime_to}
    out: list[PrimeIdealData] = []
    p = max(2, min_norm)
    while len(out) < count:
        if p > norm_bound:
            raise ResourceLimitError(
                f"prime search exhausted residue norms up to {norm_bound}")
        if _is_prime(p) and all(p % a for a in avoid if a > 1):
            if field.is_rational:
                out.append(PrimeIdealData(p, field.element(p), p, "split"))
            elif splitting_type(field, p) == "split":
                g = solve_norm_equation(field, p)
                if g is None:
                    raise ResourceLimitError(
                        f"no small generator for a prime of norm {p}; "
                        "is the class number 1?")
                a0, a1 = g.coords
                w_res = (-int(a0) * pow(int(a1), -1, p)) % p
                out.append(PrimeIdealData(p, g, p, "split", w_res))
        p += 1
    return out


def residue(x: FieldElement, prime: PrimeIdealData) -> int:
    """Image of x in the residue field F_p of the prime (degree one)."""
    p = prime.rational_prime
    if x.field.is_rational:
        c = x.coords[0]
        return (c.numerator * pow(c.denominator, -1, p)) % p
    c0, c1 = x.coords
    if c0.denominator % p == 0 or c1.denominator % p == 0:
        raise DomainError("element is not integral at the prime")
    r0 = c0.numerator * pow(c0.denominator, -1, p)
    r1 = c1.numerator * pow(c1.denominator, -1, p)
    return (r0 + r1 * prime.omega_residue) % p


def valuation(x: FieldElement, prime: PrimeIdealData) -> int:
    """Exact valuation ord of x at the prime (degree-one primes)."""
    if not x:
        raise DomainError("valuation of zero")
    f = x.field
    p = prime.rational_prime
    if f.is_rational:
        return _frac_ord(x.coords[0], p)
    den = math.lcm(x.coords[0].denominator, x.coords[1].denominator)
    shift = _int_ord(den, p)
    y = x * den
    st = prime.splitting_type
    if st == "inert":
        v = min(_frac_ord(y.coords[0], p) if y.coords[0] else 10**9,
                _frac_ord(y.coords[1], p) if y.coords[1] else 10**9)
        return v - shift
    if st == "ramified":
        return _frac_ord(y.norm(), p) - 2 * shift
    g = prime.generator
    gc = g.conjugate()
    gn = g.norm()
    v = 0
    while residue(y, prime) == 0:
        y = y * gc
        y = FieldElement(f, tuple(c / gn for c in y.coords))
        v += 1
    return v - shift


def _frac_ord(c: Fraction, p: int) -> int:
    return _int_ord(c.numerator, p) - _int_ord(c.denominator, p)


def _int_ord(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# zeta values


@dataclass(frozen=True)
class ZetaValue:
    value: float
    certified_error: float


_ZETA_CACHE: dict = {}


def dedekind_zeta(field: NumberFieldSpec, s: int, tail_bound: float = 1e-6,
                  prime_bound: int = DEFAULT_PRIME_BOUND) -> ZetaValue:
    """Euler product over rational primes with a certified truncation error.

    The local factor at p is determined by the splitting type.  The tail of
    log zeta beyond the cutoff P is bounded by 2 d P^(1-s)/(s-1), which gives
    a rigorous bound on the relative truncation error.
    """
    if s < 2:
        raise DomainError("zeta evaluation requires s >= 2")
    key = (field.label, field.discriminant, s, tail_bound, prime_bound)
    if key in _ZETA_CACHE:
        return _ZETA_CACHE[key]
    d = field.degree
    target = max(tail_bound, 1e-12)
    P = int(math.ceil((2 * d / ((s - 1) * target)) ** (1 / (s - 1)))) + 1
    P = min(max(P, 100), prime_bound)
    ps = primes_up_to(P).astype(float)
    if field.is_rational:
        log_val = -np.log1p(-ps ** (-s)).sum()
    else:
        ips = primes_up_to(P)
        kinds = np.array([_splitting_code(field, int(p)) for p in ips])
        x = ps ** (-s)
        log_val = (
            -2.0 * np.log1p(-x[kinds == 1]).sum()      # split
            - np.log1p(-x[kinds == 0]).sum()           # ramified
            - np.log1p(-(ps[kinds == -1] ** (-2 * s))).sum()  # inert
        )
    value = float(np.exp(log_val))
    tail_log = 2 * d * P ** (1 - s) / (s - 1)
    out = ZetaValue(value, value * math.expm1(tail_log))
    _ZETA_CACHE[key] = out
    return out


def _splitting_code(field, p):
    st = splitting_type(field, p)
    return 1 if st == "split" else (0 if st == "ramified" else -1)


_BERNOULLI = (Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42))


def riemann_zeta_em(s: int, cutoff: int = 64) -> ZetaValue:
    """Riemann zeta at an integer s >= 2 by Euler-Maclaurin summation.

    The error is bounded by the magnitude of the first omitted correction
    term; with the default cutoff this is far below 1e-15.
    """
    if s < 2:
        raise DomainError("zeta evaluation requires s >= 2")
    N = cutoff
    head = sum(j ** (-float(s)) for j in range(1, N))
    val = head + 0.5 * N ** (-s) + N ** (1 - s) / (s - 1)
    rising = float(s)
    power = N ** (-s - 1)
    for k, b in enumerate(_BERNOULLI, start=1):
        val += float(b) / math.factorial(2 * k) * rising * power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= N * N
    err = (1 / 30) / math.factorial(8) * rising * power
    return ZetaValue(val, float(err) + 1e-15)


# ---------------------------------------------------------------------------
# field spec files


def load_field_spec(path) -> NumberFieldSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return field_from_config(fh.read())


def field_from_config(text: str) -> NumberFieldSpec:
    """Build a field from plain key = value lines (see README for keys)."""
    kv: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"bad field spec line: {line!r}")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    label = kv.get("label", "user-field")
    if "m" in kv:
        m = int(kv["m"])
        base = rational_field() if m == 0 else quadratic_field(m)
        cn = int(kv.get("class_number", base.class_number))
        if cn != 1:
            raise ConfigurationError("only class number one is supported")
        w = int(kv.get("w_F", base.roots_of_unity))
        reg = float(_parse_rational(kv["regulator"])) if "regulator" in kv \
            else base.regulator
        units = base.fundamental_units
        for i in range(1, 3):
            if f"unit_{i}" in kv:
                units = tuple(list(units[: i - 1]) + [tuple(
                    _parse_rational(c) for c in kv[f"unit_{i}"].split(","))])
        return NumberFieldSpec(
            label=label, degree=base.degree, signature=base.signature,
            discriminant=base.discriminant, class_number=1,
            roots_of_unity=w, regulator=reg, fundamental_units=units,
            m=base.m, half=base.half)
    # generic field: explicit embedding table
    required = ("degree", "signature", "discriminant", "class_number", "w_F")
    for k in required:
        if k not in kv:
            raise ConfigurationError(f"field spec missing key {k!r}")
    d = int(kv["degree"])
    r1, r2 = (int(x) for x in kv["signature"].split(","))
    if r1 + 2 * r2 != d:
        raise ConfigurationError("signature does not match the degree")
    table = []
    for i in range(1, r1 + r2 + 1):
        key = f"embedding_{i}"
        if key not in kv:
            raise ConfigurationError(f"field spec missing key {key!r}")
        row = tuple(_parse_complex(z) for z in kv[key].split(","))
        if len(row) != d:
            raise ConfigurationError(f"{key} needs {d} entries")
        table.append(row)
    units = []
    i = 1
    while f"unit_{i}" in kv:
        units.append(tuple(_parse_rational(c) for c in kv[f"unit_{i}"].split(",")))
        i += 1
    spec = NumberFieldSpec(
        label=label, degree=d, signature=(r1, r2),
        discriminant=int(kv["discriminant"]),
        class_number=int(kv["class_number"]),
        roots_of_unity=int(kv["w_F"]),
        regulator=float(_parse_rational(kv.get("regulator", "1"))),
        fundamental_units=tuple(units),
        embedding_table=tuple(table))
    discriminant(spec)  # integrity cross-check
    return spec


def _parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def _parse_complex(s: str) -> complex:
    return complex(s.strip().replace(" ", "").replace("i", "j"))
