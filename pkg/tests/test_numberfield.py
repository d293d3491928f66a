import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latmean.errors import ConfigurationError, DomainError, ResourceLimitError
from latmean.numberfield import (
    dedekind_zeta,
    discriminant,
    embed,
    embed_norm_sq,
    field_from_config,
    log_embed,
    norms,
    parse_field,
    quadratic_field,
    rational_field,
    residue,
    riemann_zeta_em,
    split_principal_primes,
    unit_group,
    valuation,
)

Q = rational_field()
F2 = quadratic_field(2)
FI = quadratic_field(-1)
F5 = quadratic_field(5)


# --- independent zeta oracles (plain series with integral corrections) ---

def zeta_series(s: int, N: int = 4000) -> float:
    head = sum(j ** (-float(s)) for j in range(1, N + 1))
    return head + N ** (1 - s) / (s - 1) - 0.5 * N ** (-s)


def dirichlet_l_chi4(s: int, N: int = 200000) -> float:
    total = 0.0
    for j in range(N):
        total += (-1) ** j / (2 * j + 1) ** s
    return total


def test_embed_examples():
    x = F2.element(1, 1)
    v = embed(x)
    assert v == pytest.approx((1 + math.sqrt(2), 1 - math.sqrt(2)), abs=1e-12)
    for field in (Q, F2, FI, F5):
        one = embed(field.one())
        assert all(abs(c - 1) < 1e-12 for c in one)
    assert float(embed_norm_sq(FI.omega())) == pytest.approx(2.0)


def test_log_embed_examples():
    v = log_embed(F2.element(1, 1))
    assert v[0] == pytest.approx(math.log(1 + math.sqrt(2)), abs=1e-9)
    assert v[0] + v[1] == pytest.approx(0.0, abs=1e-12)
    assert log_embed(Q.element(2)) == pytest.approx((math.log(2),))
    with pytest.raises(DomainError):
        log_embed(Q.element(0))


def test_unit_logs_trace_zero():
    for field in (F2, quadratic_field(3), F5, quadratic_field(7)):
        for u in field.units():
            assert abs(sum(log_embed(u))) < 1e-10


def test_norms_examples():
    assert norms(F2.element(1, 1)) == -1
    assert norms(Q.element(1)) == 1
    assert norms(FI.element(3, 4)) == 25
    with pytest.raises(DomainError):
        norms(Q.element(0))


def test_discriminants():
    assert discriminant(Q) == 1
    assert discriminant(FI) == -4
    assert discriminant(F2) == 8
    assert discriminant(F5) == 5


def test_unit_groups():
    ug = unit_group(F2)
    assert ug.fundamental_units[0].coords == (1, 1)
    assert ug.regulator == pytest.approx(math.sqrt(2) * math.log(1 + math.sqrt(2)),
                                         rel=1e-12)
    assert ug.roots_of_unity == 2
    assert unit_group(FI).roots_of_unity == 4
    assert unit_group(FI).regulator == 1.0
    assert unit_group(Q).regulator == 1.0
    assert unit_group(quadratic_field(-3)).roots_of_unity == 6
    # golden ratio field: unit (1+sqrt5)/2 has half-integer coordinates
    assert abs(F5.units()[0].norm()) == 1
    # a couple of longer continued fractions
    for m in (19, 94):
        eps = quadratic_field(m).units()[0]
        assert abs(eps.norm()) == 1
        assert embed(eps)[0] > 1


def test_class_number_one_guard():
    with pytest.raises(ConfigurationError):
        quadratic_field(-5)
    with pytest.raises(ConfigurationError):
        quadratic_field(79)  # real quadratic with class number 3
    with pytest.raises(ConfigurationError):
        quadratic_field(12)  # not squarefree


def test_dedekind_zeta_values():
    z = dedekind_zeta(Q, 2)
    assert abs(z.value - math.pi**2 / 6) < 1e-6
    assert abs(z.value - zeta_series(2)) < 1e-6
    z3 = dedekind_zeta(Q, 3)
    assert abs(z3.value - zeta_series(3)) < 1e-6
    zi = dedekind_zeta(FI, 2)
    target = zeta_series(2) * dirichlet_l_chi4(2)
    assert abs(zi.value - target) < 1e-4
    with pytest.raises(DomainError):
        dedekind_zeta(Q, 1)


def test_zeta_certified_error_is_true_bound():
    for field in (Q, FI, F2):
        full = dedekind_zeta(field, 2, tail_bound=1e-7, prime_bound=200000)
        half = dedekind_zeta(field, 2, tail_bound=1e-7, prime_bound=100000)
        assert abs(full.value - half.value) < half.certified_error


def test_riemann_zeta_em():
    assert abs(riemann_zeta_em(2).value - math.pi**2 / 6) < 1e-14
    assert abs(riemann_zeta_em(4).value - math.pi**4 / 90) < 1e-14


def test_split_principal_primes():
    ps = split_principal_primes(Q, set(), 3)
    assert [p.residue_norm for p in ps] == [2, 3, 5]
    psi = split_principal_primes(FI, set(), 2)
    assert [(p.residue_norm, tuple(abs(c) for c in p.generator.coords))
            for p in psi] == [(5, (2, 1)), (13, (3, 2))]
    ps2 = split_principal_primes(F2, set(), 1)
    assert ps2[0].residue_norm == 7
    assert abs(ps2[0].generator.norm()) == 7
    # coprimality constraint skips the prime over 5
    skip = split_principal_primes(FI, {5}, 1)
    assert skip[0].residue_norm == 13
    with pytest.raises(ResourceLimitError):
        split_principal_primes(F2, set(), 1, norm_bound=5)


def test_residues_and_valuations():
    pr = split_principal_primes(FI, set(), 1)[0]  # norm 5, generator 2+i
    g = pr.generator
    assert residue(g, pr) == 0
    assert valuation(g, pr) == 1
    assert valuation(g * g, pr) == 2
    assert valuation(FI.element(5, 0), pr) == 1  # 5 = (2+i)(2-i)
    conj = g.conjugate()
    assert valuation(conj, pr) == 0
    pr7 = split_principal_primes(F2, set(), 1)[0]
    x = pr7.generator ** 3 * F2.element(2, 1)
    assert valuation(x, pr7) == 3


def test_product_formula_random_elements():
    rng = random.Random(11)
    for field in (Q, F2, FI, F5):
        for _ in range(25):
            coords = [Fraction(rng.randint(-30, 30), rng.randint(1, 12))
                      for _ in range(field.degree)]
            if not any(coords):
                continue
            x = field.element(*coords)
            finite = 1 / abs(float(x.norm()))
            arch = 1.0
            for k, v in enumerate(embed(x)):
                arch *= abs(v) if k < field.r1 else abs(v) ** 2
            assert finite * arch == pytest.approx(1.0, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(-40, 40), st.integers(-40, 40),
       st.integers(-40, 40), st.integers(-40, 40))
def test_embed_is_ring_homomorphism(a0, a1, b0, b1):
    x = F2.element(a0, a1)
    y = F2.element(b0, b1)
    vx, vy, vxy = embed(x), embed(y), embed(x * y)
    vsum = embed(x + y)
    for i in range(2):
        assert vxy[i] == pytest.approx(vx[i] * vy[i], abs=1e-9 * (1 + abs(vxy[i])))
        assert vsum[i] == pytest.approx(vx[i] + vy[i], abs=1e-9)


def test_exact_norm_sq_matches_embeddings():
    rng = random.Random(3)
    for field in (F2, FI, F5):
        for _ in range(20):
            x = field.element(rng.randint(-9, 9), rng.randint(-9, 9))
            float_nsq = sum(abs(v) ** 2 * (1 if k < field.r1 else 2)
                            for k, v in enumerate(embed(x)))
            assert float(embed_norm_sq(x)) == pytest.approx(float_nsq, abs=1e-9)


def test_parse_field_labels():
    assert parse_field("Q") is Q
    assert parse_field("Q(i)").m == -1
    assert parse_field("Q(sqrt2)").m == 2
    assert parse_field("Q(sqrt -7)").m == -7
    with pytest.raises(ConfigurationError):
        parse_field("E8")


def test_field_config_quadratic():
    spec = field_from_config("""
# golden ratio field
label = golden
m = 5
class_number = 1
w_F = 2
""")
    assert spec.m == 5 and spec.half
    assert spec.label == "golden"
    assert abs(spec.regulator - F5.regulator) < 1e-12


def test_field_config_generic_cubic():
    # totally real cubic of discriminant 49 (maximal real subfield of the
    # seventh cyclotomic field); basis embeddings via 2cos(2 pi k/7)
    vals = [2 * math.cos(2 * math.pi * k / 7) for k in (1, 2, 3)]
    lines = ["label = real-cubic", "degree = 3", "signature = 3, 0",
             "discriminant = 49", "class_number = 1", "w_F = 2"]
    for i, v in enumerate(vals):
        lines.append(f"embedding_{i+1} = 1, {v:.15f}, {v*v:.15f}")
    spec = field_from_config("\n".join(lines))
    assert spec.degree == 3
    x = spec.element(1, 1, 0)
    assert embed(x, spec)[0] == pytest.approx(1 + vals[0], abs=1e-9)
    with pytest.raises(ConfigurationError):
        x * x  # exact multiplication is limited to degree <= 2
