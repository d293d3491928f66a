"""Command-line front end: verification suites with reproducible reports.

Every suite is fully determined by its flags (field, sizes, primes, seed,
tolerance); reports are CSV tables or JSON documents with floats printed
to 12 significant digits, and re-running a configuration reproduces the
report byte for byte apart from the seconds column.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import hecke as hk
from . import meanvalue as mv
from . import schanuel as sc
from .errors import ConfigurationError, DomainError, LatmeanError, ResourceLimitError
from .heights import MatrixOverField, arch_components, arch_matrix_height, finite_height, global_height
from .lattices import Region, standard_lattice, shortest_vector_norm_sq
from .numberfield import (
    dedekind_zeta,
    load_field_spec,
    parse_field,
    quadratic_field,
    rational_field,
    split_principal_primes,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNKNOWN_SUITE = 2
EXIT_BAD_FIELD = 3
EXIT_RESOURCE = 4

SUITES = {
    "hecke": "coset representative counts and degree identities, closed "
             "form against enumeration",
    "zeta-identities": "degree generating series against the product of "
                       "local zeta factors",
    "inversion": "primitivity indicator inverts the integrality indicator "
                 "under the alternating coset sums",
    "orders": "matrix group and stabilizer orders, formulas against "
              "exhaustive enumeration, plus the exact ratio identity",
    "crux": "uniform solution counts of full-rank linear systems over "
            "residue fields",
    "siegel": "sublattice averages of one-point counts converge to the "
              "region volume",
    "rogers": "sublattice averages of independent-pair counts converge to "
              "the product of volumes; squared counts to the prediction",
    "second-moment": "prediction series: certified tail, term scaling, "
                     "partial sums against the closed form",
    "primitive-density": "density of primitive integer matrices against "
                         "the inverse zeta product",
    "echelon": "echelon density invariants and the exact row-space "
               "decomposition identity",
    "heights": "height inequalities, product-formula invariance, shortest "
               "vector bounds",
    "units": "unit counts in log coordinates against the leading term",
    "overlap": "annulus overlap integrals against the scaling bound "
               "(Monte Carlo, three-sigma)",
}


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


class SuiteResult:
    def __init__(self, suite: str):
        self.suite = suite
        self.rows: list[dict] = []
        self.failures: list[dict] = []

    def add(self, case: str, value, target, tolerance, passed, seconds=0.0,
            **extra):
        row = {"suite": self.suite, "case": case, "value": value,
               "target": target, "gap": abs(value - target)
               if isinstance(value, (int, float)) and
               isinstance(target, (int, float)) else "",
               "tolerance": tolerance, "pass": bool(passed),
               "seconds": seconds}
        row.update(extra)
        self.rows.append(row)
        if not passed:
            self.failures.append(row)

    @property
    def passed(self) -> bool:
        return not self.failures

    def csv_lines(self) -> list[str]:
        cols = ["suite", "case", "value", "target", "gap", "tolerance",
                "pass", "seconds"]
        out = [",".join(cols)]
        for r in self.rows:
            out.append(",".join(_fmt(r.get(c, "")) for c in cols))
        return out

    def json_doc(self) -> dict:
        return {"suite": self.suite, "pass": self.passed,
                "rows": [{k: (f"{v:.12g}" if isinstance(v, float) else v)
                          for k, v in r.items()} for r in self.rows],
                "failures": [r["case"] for r in self.failures]}


def _resolve_field(args):
    if getattr(args, "spec", None):
        return load_field_spec(args.spec)
    return parse_field(getattr(args, "field", "Q") or "Q")


def _parse_region(text: str) -> Region:
    kind, _, params = text.partition(":")
    if kind == "ball":
        return Region.ball(Fraction(params))
    if kind == "annulus":
        r1, r2 = params.split(",")
        return Region.annulus(Fraction(r1), Fraction(r2))
    if kind == "box":
        bounds = [tuple(Fraction(v) for v in pair.split(","))
                  for pair in params.split(";")]
        return Region.box(bounds)
    raise ConfigurationError(f"unknown region {text!r}")


def _parse_ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# suite runners


def run_hecke(args) -> SuiteResult:
    res = SuiteResult("hecke")
    qs = _parse_ints(args.q) if args.q else [2, 3, 5]
    for q in qs:
        t0 = time.time()
        reps = hk.coset_reps_Tp(args.n, q)
        expected = sum(q**i for i in range(args.n))
        ok = len(reps) == expected and hk.coset_reps_pairwise_distinct(reps)
        covers = hk.index_q_sublattices(args.n, q) == \
            hk.all_index_q_sublattices_hnf(args.n, q)
        res.add(f"reps(n={args.n};q={q})", len(reps), expected, 0,
                ok and covers, time.time() - t0)
        for m in range(1, args.m_max + 1):
            for k in range(0, args.k_max + 1):
                t0 = time.time()
                cf = hk.hecke_degree(m, q, k)
                bf = hk.hecke_degree(m, q, k, "brute_force")
                res.add(f"degree(m={m};q={q};k={k})", bf, cf, 0, cf == bf,
                        time.time() - t0)
    return res


def run_zeta_identities(args) -> SuiteResult:
    res = SuiteResult("zeta-identities")
    tol = args.tolerance if args.tolerance is not None else 1e-6
    for m, n, q in [(1, 2, 2), (2, 3, 2), (2, 4, 3)]:
        t0 = time.time()
        rep = hk.local_zeta_identity(m, n, q, args.k_terms)
        ok = float(rep.gap) < tol and rep.gap <= rep.tail_bound
        res.add(f"m={m};n={n};q={q};K={args.k_terms}", float(rep.partial_sum),
                float(rep.target), tol, ok, time.time() - t0)
    return res


def run_inversion(args) -> SuiteResult:
    res = SuiteResult("inversion")
    cases = [(1, 2, 2, 2), (2, 3, 2, 2), (2, 3, 3, 1)]
    for m, n, q, e in cases:
        t0 = time.time()
        rep = hk.tamagawa_inversion_check(m, n, q, e, seed=args.seed)
        res.add(f"m={m};n={n};q={q};e={e}", rep.classes_checked,
                rep.classes_checked, 0, rep.passed, time.time() - t0,
                mode=rep.mode)
    return res


def run_orders(args) -> SuiteResult:
    res = SuiteResult("orders")
    for n in (2, 3):
        for q in (2, 3):
            for level in (1, 2):
                t0 = time.time()
                formula = hk.gl_order(n, q, level)
                brute = hk.gl_order_bruteforce(n, q, level)
                res.add(f"gl(n={n};q={q};l={level})", brute, formula, 0,
                        formula == brute, time.time() - t0)
    t0 = time.time()
    sweep = []
    for n in (2, 3, 4):
        for q in (2, 3):
            for mp in range(1, min(n - 1, 2) + 1):
                for l1 in (1, 2):
                    if mp == 1:
                        sweep.append((n, q, l1, mp, (l1,)))
                    else:
                        for l2 in range(1, l1 + 1):
                            sweep.append((n, q, l1, mp, (l1, l2)))
    ok = all(hk.ratio_identity(n, q, l1, mp, ls) for n, q, l1, mp, ls in sweep)
    res.add(f"ratio-identity({len(sweep)} cases)", len(sweep), len(sweep), 0,
            ok, time.time() - t0)
    # stabilizer orders against constrained exhaustive counts
    for n, q, level, m, ls_full in [(2, 2, 1, 1, (1,)), (3, 2, 1, 2, (1, 0)),
                                    (3, 3, 1, 2, (1, 0)), (3, 2, 2, 2, (2, 1)),
                                    (2, 3, 2, 1, (2,)), (3, 3, 2, 1, (2,))]:
        t0 = time.time()
        mp = sum(1 for v in ls_full if v > 0)
        formula = hk.stabilizer_order(n, q, level, mp, tuple(
            v for v in ls_full if v > 0))
        brute = hk.stabilizer_order_bruteforce(n, q, level, m, ls_full)
        ls_txt = "|".join(str(v) for v in ls_full)
        res.add(f"stab(n={n};q={q};l={level};ls={ls_txt})", brute, formula,
                0, formula == brute, time.time() - t0)
    return res


def run_crux(args) -> SuiteResult:
    res = SuiteResult("crux")
    for p in (2, 3, 5):
        for n in (3, 4):
            for m in (1, 2):
                if m > n - 1:
                    continue
                t0 = time.time()
                cases, ok = hk.crux_exhaustive_sweep(p, n, m)
                res.add(f"p={p};n={n};m={m}", cases, cases, 0, ok,
                        time.time() - t0)
    return res


def _convergence_rows(res, suite, field, n, region, primes, run_one, target,
                      tolerance):
    gaps = []
    for q_min in primes:
        t0 = time.time()
        prime = split_principal_primes(field, set(), 1, min_norm=q_min)[0]
        avg = run_one(prime)
        dt = time.time() - t0
        gaps.append(abs(avg - target) / abs(target))
        res.add(f"{field.label};n={n};q={prime.residue_norm}", avg, target,
                tolerance, True, dt, q=prime.residue_norm)
    final_ok = gaps[-1] <= tolerance
    decreasing = all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1))
    res.rows[-1]["pass"] = bool(final_ok)
    if not final_ok:
        res.failures.append(res.rows[-1])
    res.add("gap-decreasing", int(decreasing), 1, 0, decreasing, 0.0)
    return res


def run_siegel(args) -> SuiteResult:
    res = SuiteResult("siegel")
    field = _resolve_field(args)
    region = _parse_region(args.region or "ball:3.5")
    n = args.n or 3
    primes = _parse_ints(args.primes) if args.primes else [11, 101]
    tol = args.tolerance if args.tolerance is not None else 0.05
    f = mv.AdelicTestFunction(field, n, region)
    target = f.total_volume()
    _convergence_rows(res, "siegel", field, n, region, primes,
                      lambda pr: mv.siegel_hecke_average(field, n, f, pr),
                      target, tol)
    return res


def run_rogers(args) -> SuiteResult:
    res = SuiteResult("rogers")
    field = _resolve_field(args)
    region = _parse_region(args.region or "ball:2")
    n = args.n or 3
    primes = _parse_ints(args.primes) if args.primes else [101]
    tol = args.tolerance if args.tolerance is not None else 0.10
    f = mv.AdelicTestFunction(field, n, region)
    V = f.total_volume()
    for q_min in primes:
        prime = split_principal_primes(field, set(), 1, min_norm=q_min)[0]
        t0 = time.time()
        ip = mv.rogers_pair_average(field, n, f, f, prime)
        res.add(f"independent-pairs;q={prime.residue_norm}", ip, V * V, tol,
                abs(ip - V * V) <= tol * V * V, time.time() - t0)
        if field.is_rational and region.kind == "ball":
            t0 = time.time()
            fs = mv.rogers_pair_average(field, n, f, f, prime, "full_square")
            pred = mv.second_moment_prediction(field, n, region)
            res.add(f"full-square;q={prime.residue_norm}", fs, pred.value,
                    tol, abs(fs - pred.value) <= tol * pred.value,
                    time.time() - t0)
    return res


def run_second_moment(args) -> SuiteResult:
    res = SuiteResult("second-moment")
    field = rational_field()
    n = args.n or 3
    region = _parse_region(args.region or "ball:2")
    t0 = time.time()
    pred = mv.second_moment_prediction(field, n, region,
                                       truncation=args.truncation)
    res.add("certified-tail", pred.certified_error, 0.0, 1e-6,
            pred.certified_error < 1e-6, time.time() - t0)
    res.add("series-remainder-bound", pred.series_total - pred.series_partial,
            0.0, pred.remainder_bound,
            pred.series_total - pred.series_partial <= pred.remainder_bound,
            0.0)
    R = float(region.r2)
    lhs = rhs = 0.0
    for a in range(1, 30):
        for b in range(1, 30):
            if math.gcd(a, b) == 1:
                lhs += mv.second_moment_series_term(n, 2 * R, a, b)
                rhs += mv.second_moment_series_term(n, R, a, b)
    ok = abs(lhs - 2**n * rhs) <= 1e-9 * abs(lhs)
    res.add("term-scaling", lhs, 2**n * rhs, 1e-9, ok, 0.0)
    return res


def run_primitive_density(args) -> SuiteResult:
    res = SuiteResult("primitive-density")
    field = rational_field()
    cases = [(1, 3, 100, 0.02), (1, 2, 100, 0.02), (2, 3, 20, 0.03)]
    for m, n, N, tol in cases:
        t0 = time.time()
        rep = mv.primitive_density(field, n, m, N, seed=args.seed)
        ok = rep.gap <= tol * rep.target
        res.add(f"m={m};n={n};N={N}", rep.empirical, rep.target, tol, ok,
                time.time() - t0, mode=rep.mode)
    return res


def run_echelon(args) -> SuiteResult:
    import random
    res = SuiteResult("echelon")
    rng = random.Random(args.seed)
    t0 = time.time()
    ok_all = True
    for _ in range(50):
        m = rng.choice([1, 1, 2])
        k = rng.choice([2, 3])
        m = min(m, k - 1) if m >= k else m
        pivots = sorted(rng.sample(range(k), m))
        rows = [[Fraction(0)] * k for _ in range(m)]
        for i, p in enumerate(pivots):
            rows[i][p] = Fraction(1)
        for i in range(m):
            for j in range(k):
                if j not in pivots and j > pivots[i]:
                    num = rng.randint(-12, 12)
                    den = rng.randint(1, 12)
                    rows[i][j] = Fraction(num, den)
        d1 = mv.echelon_density(rows)
        d2 = mv.echelon_density_bruteforce(rows)
        if d1 != d2:
            ok_all = False
    res.add("density-snf-vs-brute(50)", 50, 50, 0, ok_all, time.time() - t0)
    t0 = time.time()
    grid = {}
    rng2 = range(-2, 3)
    for x1 in rng2:
        for x2 in rng2:
            for x3 in rng2:
                for y1 in rng2:
                    for y2 in rng2:
                        for y3 in rng2:
                            grid[((x1, x2, x3), (y1, y2, y3))] = 1
    ok = mv.echelon_decomposition_check(3, 2, grid)
    res.add("decomposition(k=2;n=3;grid)", int(ok), 1, 0, ok,
            time.time() - t0)
    return res


def run_heights(args) -> SuiteResult:
    import random

    import numpy as np
    res = SuiteResult("heights")
    rng = np.random.default_rng(args.seed)
    field = rational_field()
    t0 = time.time()
    ok = True
    for _ in range(1000):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(m, 5))
        M = rng.standard_normal((m, n))
        X = MatrixOverField.build(field, [[Fraction(v).limit_denominator(50)
                                           for v in row] for row in M])
        arch = arch_components(X)
        h, deg = arch_matrix_height(arch)
        prod_rows = 1.0
        for row in np.array([[float(v.coords[0]) for v in r] for r in X.rows]):
            prod_rows *= float(np.linalg.norm(row))
        if not deg and h > prod_rows * (1 + 1e-9):
            ok = False
    res.add("row-product-bound(1000)", 1000, 1000, 0, ok, time.time() - t0)
    # product formula: global height invariance under scaling
    t0 = time.time()
    F2 = quadratic_field(2)
    pyrand = random.Random(args.seed)
    ok2 = True
    for _ in range(100):
        vec = [F2.element(pyrand.randint(-9, 9), pyrand.randint(-9, 9))
               for _ in range(3)]
        if not any(vec):
            continue
        X = MatrixOverField(F2, (tuple(vec),))
        c = F2.element(Fraction(pyrand.randint(1, 9), pyrand.randint(1, 9)),
                       pyrand.randint(0, 3))
        if not c:
            continue
        h1 = global_height(X)
        h2 = global_height(X.scaled(c))
        if abs(h1 - h2) > 1e-9 * max(h1, 1):
            ok2 = False
    res.add("scaling-invariance(100)", 100, 100, 0, ok2, time.time() - t0)
    t0 = time.time()
    ok3 = True
    checked = 0
    for field_q in (quadratic_field(-1), quadratic_field(2)):
        seen = set()
        for a in range(-12, 13):
            for b in range(-9, 10):
                x = field_q.element(a, b)
                if not x or abs(x.norm()) > 50:
                    continue
                key = _ideal_key(field_q, x)
                if key in seen:
                    continue
                seen.add(key)
                lat = standard_lattice(field_q, 1, x)
                l1sq = shortest_vector_norm_sq(lat)
                checked += 1
                if l1sq < 2 * abs(x.norm()):
                    ok3 = False
    res.add(f"shortest-vector-bound({checked})", checked, checked, 0, ok3,
            time.time() - t0)
    return res


def _ideal_key(field, x):
    from .linalg import hnf
    t, nm = field.omega_trace, field.omega_norm
    a, b = int(x.coords[0]), int(x.coords[1])
    H = hnf([[a, b], [-b * nm, a + b * t]])
    return tuple(tuple(r) for r in H)


def run_units(args) -> SuiteResult:
    res = SuiteResult("units")
    F2 = quadratic_field(2)
    Fi = quadratic_field(-1)
    Q = rational_field()
    t0 = time.time()
    worst = 0.0
    for kk in range(0, 81):
        k = kk / 2
        qy = sc.UnitCountQuery(F2.one(), k)
        exact = sc.unit_count(qy, F2)
        lead = sc.asymptotic_unit_count(qy, F2)
        worst = max(worst, abs(exact - lead))
    res.add("real-quadratic(k<=40)", worst, 0.0, 2.0, worst <= 2.0,
            time.time() - t0)
    ok = sc.unit_count(sc.UnitCountQuery(Fi.one(), 3.0), Fi) == 1 and \
        sc.unit_count(sc.UnitCountQuery(Q.element(3), 1.0), Q) == 0 and \
        sc.unit_count(sc.UnitCountQuery(Q.element(2), 1.0), Q) == 1
    res.add("rank-zero-cases", int(ok), 1, 0, ok, 0.0)
    return res


def _overlap_case(payload):
    label, n, r1, r2, coords, samples, seed = payload
    field = parse_field(label)
    gamma = field.element(*[Fraction(c) for c in coords])
    rep = sc.annulus_overlap_check(field, n, r1, r2, gamma, samples, seed)
    return rep


def run_overlap(args) -> SuiteResult:
    import random
    res = SuiteResult("overlap")
    rng = random.Random(args.seed)
    cases = []
    for i in range(args.cases):
        label = "Q(sqrt2)" if i % 2 == 0 else "Q(i)"
        r1 = round(rng.uniform(0, 1.2), 3)
        r2 = round(r1 + rng.uniform(0.2, 1.5), 3)
        while True:
            coords = (rng.randint(-4, 4), rng.randint(-4, 4))
            if any(coords):
                break
        cases.append((label, 2, r1, r2, coords, args.samples,
                      args.seed + 1000 + i))
    t0 = time.time()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            reps = list(ex.map(_overlap_case, cases))
    else:
        reps = [_overlap_case(c) for c in cases]
    ok = all(r.passed for r in reps)
    margin = max((r.estimate - 3 * r.std_error) - r.bound for r in reps)
    res.add(f"three-sigma-sweep({args.cases})", margin, 0.0, 0.0, ok,
            time.time() - t0)
    return res


RUNNERS = {
    "hecke": run_hecke,
    "zeta-identities": run_zeta_identities,
    "inversion": run_inversion,
    "orders": run_orders,
    "crux": run_crux,
    "siegel": run_siegel,
    "rogers": run_rogers,
    "second-moment": run_second_moment,
    "primitive-density": run_primitive_density,
    "echelon": run_echelon,
    "heights": run_heights,
    "units": run_units,
    "overlap": run_overlap,
}


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="latmean",
        description="verification suites for lattice mean value identities "
                    "over number fields")
    sub = ap.add_subparsers(dest="command")

    lp = sub.add_parser("list", help="list the verification suites")

    vp = sub.add_parser("verify", help="run one verification suite")
    vp.add_argument("suite")
    vp.add_argument("--field", default="Q")
    vp.add_argument("--spec", help="path to a field spec file")
    vp.add_argument("--n", type=int, default=None)
    vp.add_argument("--k", type=int, default=2)
    vp.add_argument("--q", help="comma-separated residue characteristics")
    vp.add_argument("--m-max", type=int, default=3)
    vp.add_argument("--k-max", type=int, default=3)
    vp.add_argument("--k-terms", type=int, default=25)
    vp.add_argument("--primes", help="comma-separated lower bounds for the "
                                     "split principal primes")
    vp.add_argument("--B", type=float, default=None)
    vp.add_argument("--region", help="ball:R | annulus:R1,R2 | "
                                     "box:a,b;a,b;...")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--tolerance", type=float, default=None)
    vp.add_argument("--truncation", type=int, default=200)
    vp.add_argument("--cases", type=int, default=100)
    vp.add_argument("--samples", type=int, default=10**6)
    vp.add_argument("--out", help="report path (default stdout)")
    vp.add_argument("--format", choices=("csv", "json"), default="csv")
    vp.add_argument("--workers", type=int, default=1)

    cp = sub.add_parser("count", help="counting commands")
    cs = cp.add_subparsers(dest="what")
    cpp = cs.add_parser("projective")
    cpp.add_argument("--field", default="Q")
    cpp.add_argument("--spec")
    cpp.add_argument("--n", type=int, required=True)
    cpp.add_argument("--B", type=float, required=True)

    kp = sub.add_parser("constants", help="closed-form constants")
    ks = kp.add_subparsers(dest="what")
    ksc = ks.add_parser("schanuel")
    ksc.add_argument("--field", default="Q")
    ksc.add_argument("--spec")
    ksc.add_argument("--n", type=int, required=True)

    return ap


def _emit(res: SuiteResult, args) -> None:
    if args.format == "json":
        text = json.dumps(res.json_doc(), indent=2)
    else:
        text = "\n".join(res.csv_lines())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if not res.passed:
        sys.stderr.write(json.dumps(
            {"suite": res.suite, "failures": [r["case"] for r in res.failures]})
            + "\n")


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.command == "list" or args.command is None:
        width = max(len(s) for s in SUITES)
        for name, desc in SUITES.items():
            print(f"{name:<{width}}  {desc}")
        return EXIT_PASS
    try:
        if args.command == "verify":
            if args.suite not in RUNNERS:
                sys.stderr.write(f"unknown suite: {args.suite}\n")
                return EXIT_UNKNOWN_SUITE
            res = RUNNERS[args.suite](args)
            _emit(res, args)
            return EXIT_PASS if res.passed else EXIT_FAIL
        if args.command == "count" and args.what == "projective":
            field = _resolve_field(args)
            cfg = sc.ProjectiveCountConfig(field, args.n, args.B)
            print(sc.count_projective_points(cfg))
            return EXIT_PASS
        if args.command == "constants" and args.what == "schanuel":
            field = _resolve_field(args)
            print(f"{sc.schanuel_constant(field, args.n):.12g}")
            return EXIT_PASS
        sys.stderr.write("nothing to do; see --help\n")
        return EXIT_UNKNOWN_SUITE
    except ConfigurationError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_BAD_FIELD
    except ResourceLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except (DomainError, LatmeanError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
