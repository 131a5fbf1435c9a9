"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

import conftest
from hypergap.angular import AngularProblem, eigen_bounds, oracle_fd, solve_eigen
from hypergap.hypgeo import DomainParams, diameter
from hypergap.spectrum import (
    alternative_lemma_proof_check,
    condition_bound_c,
    delta_sweep,
    large_gap_regime,
    large_gap_threshold,
    log_concavity_probe,
    path_gap_identity,
    positive_points,
    shih_report,
    sturm_compare_i,
    sturm_compare_ii,
    sturm_envelopes,
)
from hypergap.sweep import SweepSpec, run_sweep

PI = math.pi
SWEEP_C = list(np.linspace(0.05, 0.4, 20))
SWEEP_THETA = list(np.linspace(0.6, 1.5, 20))


def record(num, title, ok, detail):
    conftest.ACCEPTANCE[num] = (bool(ok), title, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] {num}. {title}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def sweep():
    start = time.perf_counter()
    records = run_sweep(SweepSpec(SWEEP_C, SWEEP_THETA, jobs=1))
    return records, time.perf_counter() - start


def _domains_for_checks():
    out = [DomainParams.symmetric(c, ts) for c in (0.05, 0.1, 0.2, 0.4) for ts in (PI / 4, 1.0, 1.3)]
    out += [DomainParams(0.2, PI / 4, 5 * PI / 8), DomainParams(0.2, 0.6, 2.0), DomainParams(0.3, 1.0, 1.9)]
    return out


def test_criterion_01_witness(sweep):
    records, elapsed = sweep
    valid = [r for r in records if r["status"] == "ok"]
    witnesses = [r for r in valid if r["normalized_gap"] < 1 - 1e-3]
    best = min(valid, key=lambda r: r["normalized_gap"])
    ok = len(records) == 400 and witnesses and elapsed <= 60.0
    record(1, "witness with normalized gap < 1 - 1e-3", ok,
           f"{len(witnesses)}/{len(valid)} witnesses, min {best['normalized_gap']:.6f} at "
           f"c={best['c']:.4g}, theta*={best['theta_star']:.4g}; 20x20 sweep in {elapsed:.1f} s")


def test_criterion_02_large_gap():
    c, ts = 4.0, 1.45
    v = large_gap_regime(c, ts)
    ok = v.report.normalized_gap > 1 + 1e-3 and ts >= large_gap_threshold(c)
    record(2, "large-gap regime", ok,
           f"c=4, theta*=1.45 (threshold {large_gap_threshold(c):.4f}): normalized gap {v.report.normalized_gap:.6f}")


def test_criterion_03_rough_gap(sweep):
    records, _ = sweep
    checked = [r for r in records if r["condition_bound_c"]]
    bad = [r for r in checked if not r["rough_gap_ok"]]
    record(3, "rough gap bounds with margin 1e-9 c^2", checked and not bad,
           f"{len(checked)} domains under the radial-branch condition, {len(bad)} violations")


def test_criterion_04_eigen_sandwich(sweep):
    records, _ = sweep
    bad = [r for r in records if not r["eigen_bounds_ok"]]
    n = 3 * len(records)
    extra_bad = 0
    for mu in (0.0, 0.01, 0.25, 1.0, 4.0, 16.0, 64.0):
        for t0, t1 in ((PI / 4, 3 * PI / 4), (0.6, 2.0), (1.2, 1.8), (0.3, 2.9)):
            p = AngularProblem(mu, t0, t1)
            for k in (1, 2):
                lo, hi = eigen_bounds(p, k)
                lam = solve_eigen(p, k).lam
                extra_bad += not (lo < lam <= hi)
                n += 1
    record(4, "eigenvalue sandwiches (strict lower)", not bad and extra_bad == 0,
           f"{n} (mu, domain, k) cases, {len(bad) + extra_bad} violations")


def test_criterion_05_diameter(sweep):
    records, _ = sweep
    bad = [r for r in records if not r["diameter_bounds_ok"]]
    cs = (0.4, 0.2, 0.1, 0.05, 0.01)
    vals = [PI**2 / (c * c * diameter(DomainParams.symmetric(c, PI / 4)).diameter ** 2) for c in cs]
    refined_bad = 0
    for r in records:
        d = DomainParams(r["c"], r["theta0"], r["theta1"])
        rep = diameter(d)
        k = d.c / PI
        lc = -math.log(math.sin(d.theta_star))
        ratio = PI**2 / (d.c**2 * rep.diameter**2)
        refined_bad += not ((1 + k * (2 * lc + rep.eta)) ** -2 * (1 - 1e-12) <= ratio <= (1 + k * lc) ** -2 * (1 + 1e-12))
    increasing = all(a < b for a, b in zip(vals, vals[1:]))
    ok = not bad and not refined_bad and increasing and vals[-1] >= 0.95
    record(5, "diameter sandwiches and limit", ok,
           f"{len(records)} domains, {len(bad) + refined_bad} violations; pi^2/(c^2 D^2) = "
           + ", ".join(f"{v:.4f}" for v in vals))


def test_criterion_06_path_identity():
    domains = [d for d in _domains_for_checks() if condition_bound_c(d)]
    residuals = [path_gap_identity(d, n_t=33).residual for d in domains]
    ok = len(domains) >= 10 and max(residuals) <= 1e-5
    record(6, "path identity", ok, f"{len(domains)} domains, max residual {max(residuals):.2e}")


def test_criterion_07_ratio_bound():
    deltas = delta_sweep(PI / 4, 3 * PI / 4, cs=(0.4, 0.2, 0.1, 0.05), n_t=33)
    vals = list(deltas.values())
    spread = (max(vals) - min(vals)) / min(vals)
    ok = min(vals) > 0 and spread <= 0.2
    record(7, "max R <= 1 - delta, delta independent of c", ok,
           "delta " + ", ".join(f"c={c}: {v:.5f}" for c, v in deltas.items()) + f"; spread {spread:.2%}")


def test_criterion_08_envelopes():
    domains = _domains_for_checks()
    failures, reverse = 0, 0
    for d in domains:
        for t in (0.0, 0.5, 1.0):
            v = sturm_envelopes(d, t, strict=False)
            failures += not v.holds
            reverse += v.reverse_lower_holds
    n = 3 * len(domains)
    ok = len(domains) >= 10 and failures == 0
    record(8, "envelopes w1 <= h <= w2", ok,
           f"{n} (domain, t) cases, {failures} failures; the reversed lower envelope h <= w1 held in {reverse}/{n}")


def test_criterion_09_oracle():
    cases = [(mu, t0, t1) for mu in (0.0, 0.04, 1.0, 16.0)
             for t0, t1 in ((PI / 4, 3 * PI / 4), (0.6, 2.0), (1.2, 1.8), (0.3, 2.9), (PI / 4, 5 * PI / 8))]
    worst = 0.0
    for mu, t0, t1 in cases:
        p = AngularProblem(mu, t0, t1)
        for k in (1, 2, 3):
            a, b = solve_eigen(p, k).lam, oracle_fd(p, k).lam
            worst = max(worst, abs(a - b) / b)
    record(9, "shooting vs finite differences", len(cases) == 20 and worst <= 1e-7,
           f"{len(cases)} cases x k=1..3, worst relative difference {worst:.2e}")


def test_criterion_10_shih():
    cert = shih_report(5 * PI / 8, 0.2)
    _, probes = log_concavity_probe(cert.report.domain)
    positive = len(positive_points(probes))
    ok = cert.passed and cert.margin >= 1e-3
    record(10, "gap > 3 pi^2 / (2 D^2)", ok,
           f"gap {cert.report.gap:.6f} vs {cert.half_bound:.6f}, margin {cert.margin:.3f}; "
           f"Hessian of log u1 positive at {positive}/{len(probes)} probe points")


def test_criterion_11_sturm():
    z = sturm_compare_i(4.0, 1.0, length=4.0)
    same = sturm_compare_i(2.0, 2.0, length=4.0)
    sol = sturm_compare_ii(1.0, 0.0, PI / 2)
    exact = (abs(z.x1 - PI / 2) < 1e-9 and abs(z.x2 - PI) < 1e-9 and z.holds and same.equal and sol.holds
             and np.allclose(sol.f1, np.sin(sol.x), atol=1e-11))
    checks = []
    for d, mu in ((DomainParams(0.5, PI / 4, 3 * PI / 4), 0.25), (DomainParams(0.2, 0.6, 2.0), 0.04),
                  (DomainParams(0.2, PI / 4, 5 * PI / 8), 0.04)):
        checks += alternative_lemma_proof_check(d, mu, n_delta=3)
    ordering = all(c.passed for c in checks)
    record(11, "Sturm harness and alternative bracket proof", exact and ordering,
           f"constant cases exact: {exact}; a1 < theta1 < a2 in {sum(c.passed for c in checks)}/{len(checks)} cases")
