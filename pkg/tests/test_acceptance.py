"""Acceptance criteria 1-10, one pass/fail line each.

Lines are printed as the tests run and repeated in the terminal summary.
"""
import time

import numpy as np
import pytest

from soefgt import (ContourSpec, TransformRequest, apply, cf_soe, direct, max_error, mode_sums,
                    plan, reduce, soe_for_modes, soe_from_contour)
from soefgt.bench import convergence, delta_sweep, geometric_rate, run_bench

from conftest import ACCEPTANCE_LINES

CONTOURS = ("parabolic", "hyperbolic", "talbot")
SWEEP = range(8, 65, 4)
# pinned on the first run of this build, see test_contour.py
PINNED_RATE = {"parabolic": 2.854, "hyperbolic": 3.096, "talbot": 3.843}
TABLE1 = {3: 0.44e-5, 4: 0.55e-7, 5: 0.63e-9, 6: 0.76e-11}
TABLE2 = {3: 0.44e-5, 6: 0.79e-11}
SEED = 2024


def report(k, ok, detail, elapsed=None, limit=None):
    if limit is not None and elapsed > limit:
        ok = False
        detail += f"; too slow ({elapsed:.1f}s > {limit}s)"
    t = "" if elapsed is None else f" [{elapsed:.1f}s]"
    line = f"CRITERION {k} {'PASS' if ok else 'FAIL'}: {detail}{t}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def within(x, ref, factor):
    return ref / factor <= x <= ref * factor


def test_criterion_01_cf_accuracy():
    t0 = time.perf_counter()
    ns = np.arange(2, 15, 2)
    E = {n: max_error(cf_soe(n)).max_abs_error for n in ns}
    rate = geometric_rate(ns, [E[n] for n in ns])
    ok = E[6] <= 1e-4 and E[12] <= 5e-10 and 6.0 <= rate <= 9.0 and E[14] >= 1e-14
    report(1, ok, f"E6={E[6]:.2e} E12={E[12]:.2e} rate={rate:.2f} E14={E[14]:.2e}",
           time.perf_counter() - t0, 1.0)


def test_criterion_02_contour_convergence():
    t0 = time.perf_counter()
    ok, parts = True, []
    for kind in CONTOURS:
        rows, rates = convergence(kind, SWEEP)
        E = np.array([r[1] for r in rows])
        first = next((n for n, e in zip(SWEEP, E) if e <= 1e-12), None)
        floor = E.min()
        good = (first is not None and 1e-14 <= floor <= 1e-12
                and rates["rate"] == pytest.approx(PINNED_RATE[kind], rel=0.02))
        ok &= good
        parts.append(f"{kind}: <=1e-12 at n={first}, floor={floor:.1e}, rate={rates['rate']:.2f}")
    report(2, ok, "; ".join(parts), time.perf_counter() - t0, 10.0)


def test_criterion_03_balanced_truncation():
    t0 = time.perf_counter()
    ok, parts = True, []
    for kind in CONTOURS:
        rows, rates = convergence(kind, SWEEP, do_reduce=True)
        max_nr = max(r[2] for r in rows)
        bad = [n for n, E, nr, Er in rows if Er > E + E / 3]
        good = max_nr <= 18 and not bad and rates["reduced_rate"] >= rates["rate"]
        ok &= good
        parts.append(f"{kind}: max n_r={max_nr}, E_r>E+tol at n={bad}, "
                     f"rate {rates['rate']:.2f}->{rates['reduced_rate']:.2f}")
    report(3, ok, "; ".join(parts), time.perf_counter() - t0, 30.0)


def test_criterion_04_stabilized_reduction():
    t0 = time.perf_counter()
    results = []
    for n in (40, 48, 56, 64, 72, 80):
        s = soe_from_contour(ContourSpec("stabilized-hyperbolic", n))
        E = max_error(s).max_abs_error
        r, rep = reduce(s, E / 3)
        results.append((max_error(r).max_abs_error, rep.reduced_n, n, E))
    best = min(res for res in results if res[1] <= 24)
    Er, nr, n, E = best
    report(4, nr <= 24 and Er <= 1e-14,
           f"best n={n}: E={E:.1e} -> n_r={nr}, E_r={Er:.1e} (need <=1e-14)",
           time.perf_counter() - t0, 10.0)


def test_criterion_05_cf_irreducible():
    t0 = time.perf_counter()
    orders = {}
    for n in range(4, 13):
        s = cf_soe(n)
        _, rep = reduce(s, max_error(s).max_abs_error / 3)
        orders[n] = rep.reduced_n
    changed = {n: r for n, r in orders.items() if r != n}
    report(5, not changed, f"orders changed at {changed or 'none'}", time.perf_counter() - t0, 5.0)


def test_criterion_06_same_points():
    t0 = time.perf_counter()
    errs = {ne: run_bench("SamePoints", 100_000, n_e=ne, seed=SEED).max_rel_error for ne in TABLE1}
    ok = all(within(errs[ne], TABLE1[ne], 10) for ne in TABLE1)
    detail = " ".join(f"n_e={ne}: {errs[ne]:.2e} (published {TABLE1[ne]:.2e})" for ne in TABLE1)
    report(6, ok, detail, time.perf_counter() - t0, 10.0 * len(TABLE1))


def test_criterion_07_distinct_points():
    t0 = time.perf_counter()
    errs = {ne: run_bench("DistinctPoints", 100_000, 100_000, n_e=ne, seed=SEED).max_rel_error
            for ne in TABLE2}
    ok = all(within(errs[ne], TABLE2[ne], 10) for ne in TABLE2)
    detail = " ".join(f"n_e={ne}: {errs[ne]:.2e} (published {TABLE2[ne]:.2e})" for ne in TABLE2)
    report(7, ok, detail, time.perf_counter() - t0, 20.0 * len(TABLE2))


def test_criterion_08_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(SEED))
    worst = 0.0
    for _ in range(50):
        N, M = rng.integers(1, 2001, size=2)
        ne = int(rng.integers(3, 7))
        delta = 10.0 ** rng.uniform(-3, 3)
        y = rng.uniform(-2, 2, N)
        x = rng.uniform(-2, 2, M) if rng.random() < 0.5 else None
        a = rng.standard_normal(N)
        req = TransformRequest(y, a, delta, x)
        u = apply(plan(req, n_e=ne), a).potentials
        ref = direct(req).potentials
        bound = 20 * max_error(soe_for_modes(ne)).max_abs_error * np.abs(a).sum()
        worst = max(worst, np.max(np.abs(u - ref)) / bound)
    worst_h = 0.0
    for _ in range(20):
        N = int(rng.integers(1, 201))
        y, a = rng.random(N), rng.standard_normal(N)
        x = rng.random(int(rng.integers(1, 201))) if rng.random() < 0.5 else None
        delta = 10.0 ** rng.uniform(-3, 1)
        req = TransformRequest(y, a, delta, x)
        soe = soe_for_modes(6)
        hp, hm = mode_sums(plan(req, soe), a)
        d = req.target_points[:, None] - y[None, :]
        t = soe.nodes / np.sqrt(delta)
        for k in range(len(soe)):
            K = np.exp(-t[k] * np.abs(d))
            err = max(np.abs(hp[k] - np.where(d >= 0, K, 0) @ a).max(),
                      np.abs(hm[k] - np.where(d < 0, K, 0) @ a).max())
            worst_h = max(worst_h, err / np.abs(a).sum())
    report(8, worst <= 1.0 and worst_h <= 1e-12,
           f"max |fgt-direct|/(20 E_n sum|a|)={worst:.2e}, h-mode rel err={worst_h:.1e}",
           time.perf_counter() - t0, 10.0)


def test_criterion_09_complexity():
    t0 = time.perf_counter()
    t1 = min(run_bench("SamePoints", 1_000_000, n_e=6, seed=SEED).t_rem for _ in range(3))
    t2 = min(run_bench("SamePoints", 2_000_000, n_e=6, seed=SEED).t_rem for _ in range(3))
    ratio = t2 / t1
    e = {N: run_bench("SamePoints", N, n_e=4, seed=SEED).max_rel_error for N in (100_000, 1_000_000)}
    agree = max(e.values()) / min(e.values())
    rec = run_bench("SamePoints", 1_000_000, n_e=6, seed=SEED)
    pre = run_bench("SamePoints", 1_000_000, n_e=6, seed=SEED, presort=True)
    report(9, 1.5 <= ratio <= 3.0 and agree <= 10,
           f"t_rem(2e6)/t_rem(1e6)={ratio:.2f}, n_e=4 error spread across N x{agree:.2f}; "
           f"throughput {rec.throughput / 1e6:.1f} M pts/s full, "
           f"{pre.throughput / 1e6:.1f} M pts/s presorted", time.perf_counter() - t0)


def test_criterion_10_delta_sweep():
    t0 = time.perf_counter()
    deltas = [10.0 ** k for k in range(-7, 5)]
    err = np.array([e for _, e in delta_sweep(100_000, 6, deltas, SEED)])
    E = max_error(soe_for_modes(6)).max_abs_error
    monotone = bool(np.all(err[1:] >= err[:-1] / 3))
    sat = err[-1]
    ok = monotone and within(sat, E, 10) and err[-1] >= err[0]
    report(10, ok, f"errors {err[0]:.1e} .. {sat:.1e} (E_n={E:.1e}), "
           f"within x3 monotone={monotone}", time.perf_counter() - t0, 30.0)
