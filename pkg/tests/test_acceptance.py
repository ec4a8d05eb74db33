"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
lines interleaved with pytest's own output; they are printed either way).
"""
import math
import time

import numpy as np
import pytest
from scipy import stats

from copulasched import (
    PaperPiecewise,
    clayton,
    eval_H,
    eval_phi,
    eval_theta_luyu,
    independent,
    sample,
)
from copulasched.bounds import verify_lower_bound
from copulasched.mechanism import Instance, check_monotonicity, estimate_ratio
from copulasched.optimizer import REFERENCE_AB, critical_points, maximize_phi, regime_for

REFERENCE_VALUES = {
    2: 1.5067710964,
    3: 1.5412707361,
    4: 1.5559952305,
    5: 1.5634859375,
    6: 1.5679473463,
    7: 1.5709131851,
    8: 1.5730320737,
    9: 1.5746303803,
    10: 1.5758769995,
    15: 1.5795353027,
    20: 1.5811826690,
    30: 1.5828322598,
    45: 1.5839252561,
    70: 1.5846893837,
    100: 1.5850948285,
    200: 1.5855735653,
    500: 1.5858603200,
    1000: 1.5859488980,
    5000: 1.5860275919,
    10**4: 1.5860403769,
    10**5: 1.5860442151,
    10**6: 1.5860456086,
}
SWEEP_SMALL = (3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 45, 70, 100, 200, 500, 1000)
SWEEP_LARGE = (10**4, 10**5, 10**6)
INDEPENDENT_VALUE = 1.58605822203599


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:>2} ({title}): {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def sweep():
    """Maximum of phi for every n with a reference (a, b), 10 runs each."""
    out = {}
    t0 = time.perf_counter()
    for n in REFERENCE_VALUES:
        a, b = REFERENCE_AB[n]
        out[n] = maximize_phi(regime_for(n, a, b), runs=10, seed=0)
    return out, time.perf_counter() - t0


def test_criterion_01_independent_golden(verdict):
    t0 = time.perf_counter()
    rep = maximize_phi(regime_for(None, 1.715, 0.76), runs=10, seed=0)
    dt = time.perf_counter() - t0
    err = abs(rep.max_value - INDEPENDENT_VALUE)
    dxy = max(abs(rep.argmax_x - 1.3575), abs(rep.argmax_y - 1.5174263352))
    ok = err <= 1e-8 and dxy <= 1e-4 and dt < 60
    verdict(1, "independent regime maximum", ok,
            f"value {rep.max_value!r} (err {err:.1e}), argmax ({rep.argmax_x:.10f}, {rep.argmax_y:.10f}), {dt:.1f}s")


A = 1.715
P2, P3, P4 = 2 / (A + 1), 1.0, (A + 1) / 2
CRITICAL_ROWS = [
    # (x cell, y cell, x0, y0, phi)
    ((A, math.inf), (P4, A), A, (A * A + A + 1) / (2 * A), 1.58601068358666),
    ((P4, A), (P4, A), P4, (A * A + A + A * 0.76 + 3 * 0.76) / (2 * A + 2), 1.58605822203599),
    ((P3, P4), (P4, A), 1.2027121359, 1.45036644115936, 1.58531963915869),
    ((P3, P4), (P4, A), 1.0, P4, 1.5858),
    ((P3, P4), (P3, P4), 1.0, 43 / 32, 1.5859375),
    ((P2, P3), (P4, A), 0.9983579639, P4, 1.58580149521531),
    ((P2, P3), (P3, P4), 0.98503501986, 1.33641518393347, 1.58602337235828),
]


def test_criterion_02_critical_points(verdict):
    spec = regime_for(None, 1.715, 0.76)
    misses = []
    for xr, yr, x0, y0, v0 in CRITICAL_ROWS:
        pts = critical_points(spec, (xr, yr), include_boundary=True)
        hit = any(abs(p.x - x0) <= 1e-6 and abs(p.y - y0) <= 1e-6 and abs(p.value - v0) <= 1e-8 for p in pts)
        if not hit:
            misses.append((x0, y0, v0))
    verdict(2, "critical points above 1.585", not misses,
            f"{len(CRITICAL_ROWS) - len(misses)}/{len(CRITICAL_ROWS)} rows reproduced" + (f", missing {misses}" if misses else ""))


def test_criterion_03_two_task_golden(verdict):
    t0 = time.perf_counter()
    rep = maximize_phi(regime_for(2, 2.2468, 0.7607), runs=10, seed=0)
    dt = time.perf_counter() - t0
    err = abs(rep.max_value - 1.5067710964)
    ok = err <= 1e-8 and dt < 60
    verdict(3, "two-task Clayton maximum", ok, f"value {rep.max_value!r} (err {err:.1e}), {dt:.1f}s")


def test_criterion_04_sweep(verdict, sweep):
    reports, dt = sweep
    worst = []
    for n in SWEEP_SMALL:
        rep = reports[n]
        if abs(rep.max_value - REFERENCE_VALUES[n]) > 1e-6 or rep.spread_delta > 1e-6:
            worst.append(n)
    for n in SWEEP_LARGE:
        if abs(reports[n].max_value - REFERENCE_VALUES[n]) > 1e-5:
            worst.append(n)
    max_err = max(abs(reports[n].max_value - REFERENCE_VALUES[n]) for n in SWEEP_SMALL + SWEEP_LARGE)
    max_delta = max(reports[n].spread_delta for n in SWEEP_SMALL + SWEEP_LARGE)
    ok = not worst and dt < 30 * 60
    verdict(4, "Clayton sweep over n", ok,
            f"max |err| {max_err:.1e}, max delta {max_delta:.1e}, {dt:.0f}s" + (f", failing n {worst}" if worst else ""))


def test_criterion_05_counterexample(verdict):
    theta = eval_theta_luyu(0.87793459260323, 2.09409917605545)
    err = abs(theta - 1.64065136465694)
    ok = err <= 1e-10 and theta > 1.5963
    verdict(5, "transcendental-marginal counterexample", ok, f"theta {theta!r} (err {err:.1e})")


def test_criterion_06_monotone_curve(verdict, sweep):
    reports, _ = sweep
    ns = sorted(reports)
    values = [reports[n].max_value for n in ns]
    increasing = all(b > a for a, b in zip(values, values[1:]))
    below = all(v <= INDEPENDENT_VALUE + 1e-12 for v in values)
    gap = INDEPENDENT_VALUE - reports[10**6].max_value
    ok = increasing and below and 0 <= gap < 2e-5
    verdict(6, "value increases with n toward the independent value", ok,
            f"strictly increasing={increasing}, all below={below}, gap at n=1e6 {gap:.2e}")


def test_criterion_07_sampler(verdict):
    t0 = time.perf_counter()
    f2 = PaperPiecewise(2.2468, 0.7607)
    x = sample(clayton(2, f2), 100_000, seed=1).draws
    recip = float(np.max(np.abs(x[:, 0] * x[:, 1] - 1.0)))

    f = PaperPiecewise(1.715, 0.76)
    spec3 = clayton(3, f)
    x3 = sample(spec3, 100_000, seed=2).draws
    grid = [0.75, 0.9, 1.0, 1.15, 1.4]
    worst_z = 0.0
    for s in grid:
        for t in grid:
            emp = np.mean((x3[:, 0] <= s) & (x3[:, 1] <= t))
            h = eval_H(spec3, s, t)
            se = math.sqrt(max(h * (1 - h), 1e-12) / x3.shape[0])
            worst_z = max(worst_z, abs(emp - h) / se)

    xi = sample(independent(f, n=1), 100_000, seed=3).draws[:, 0]
    ks = stats.kstest(xi, f.cdf)
    dt = time.perf_counter() - t0
    ok = recip <= 1e-9 and worst_z <= 3 and ks.pvalue > 0.01 and dt < 30
    verdict(7, "sampler", ok,
            f"max|X1X2-1| {recip:.1e}, worst pairwise z {worst_z:.2f}, KS p {ks.pvalue:.3f}, {dt:.1f}s")


def test_criterion_08_simulation(verdict):
    ones = Instance([[1, 1], [1, 1]])
    f2 = PaperPiecewise(2.2468, 0.7607)
    f = PaperPiecewise(1.715, 0.76)
    c_mean, _ = estimate_ratio(ones, clayton(2, f2), 100_000, seed=0)
    i_mean, i_se = estimate_ratio(ones, independent(f), 100_000, seed=0)
    rng = np.random.default_rng(8)
    worst = -math.inf
    for k in range(200):
        inst = Instance(rng.exponential(1.0, (2, 2)) * rng.choice([0.2, 1.0, 5.0], (2, 2)))
        m, se = estimate_ratio(inst, clayton(2, f2), 100_000, seed=k)
        worst = max(worst, m - 3 * se)
    ok = c_mean == 1.0 and abs(i_mean - 1.5) <= 3 * i_se and worst <= 1.5067711
    verdict(8, "mechanism simulation", ok,
            f"Clayton {c_mean!r}, independent {i_mean:.5f}+-{i_se:.5f}, worst mean-3se over 200 instances {worst:.5f}")


def test_criterion_09_monotonicity(verdict):
    rng = np.random.default_rng(9)
    f = PaperPiecewise(1.715, 0.76)
    worst = worst_path = -math.inf
    checks = 0
    for k in range(100):
        n = int(rng.integers(1, 6))
        inst = Instance(rng.exponential(1.0, (2, n)))
        spec = clayton(n, f) if n >= 2 and k % 2 == 0 else independent(f, n=n)
        rep = check_monotonicity(inst, spec, 100, seed=k)
        worst = max(worst, rep.max_violation)
        worst_path = max(worst_path, rep.path_max_violation)
        checks += rep.perturbations
    ok = checks >= 10**4 and worst <= 1e-12 and worst_path <= 1e-12
    verdict(9, "monotonicity", ok, f"{checks} perturbations, max violation {worst:.1e}, sampled paths {worst_path:.1e}")


def test_criterion_10_lower_bound(verdict):
    t0 = time.perf_counter()
    rep = verify_lower_bound(1e-3, 1.5852)
    dt = time.perf_counter() - t0
    ok = rep.passed and 1.5852 - rep.slack <= rep.minimax <= 1.59 and dt < 600
    verdict(10, "lower-bound certificate", ok,
            f"grid minimax {rep.minimax:.6f}, slack {rep.slack:.2e}, refined {rep.refined_minimax:.7f}, "
            f"{rep.tuples_checked:.3e} tuples, {dt:.2f}s")


def test_criterion_11_reflection_symmetry(verdict):
    grid = 0.1 + (10 - 0.1) * np.arange(1, 201) / 200
    worst = {}
    for name, spec in (("independent", independent(PaperPiecewise(1.715, 0.76))),
                       ("Clayton n=2", clayton(2, PaperPiecewise(2.2468, 0.7607)))):
        w = 0.0
        for x in grid:
            for y in grid:
                w = max(w, abs(eval_phi(spec, x, y) - eval_phi(spec, 1 / y, 1 / x)))
        worst[name] = w
    ok = all(w <= 1e-10 for w in worst.values())
    verdict(11, "phi(x,y) = phi(1/y,1/x)", ok, ", ".join(f"{k} max gap {v:.1e}" for k, v in worst.items()))
