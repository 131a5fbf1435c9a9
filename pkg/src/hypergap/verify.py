"""The verification suite: every bound, identity and comparison result, over a
built-in grid of sectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .angular import AngularProblem, eigen_bounds, oracle_fd, solve_eigen
from .hypgeo import DomainParams, diameter
from .spectrum import (
    InvalidRegime,
    InvariantViolation,
    alternative_lemma_proof_check,
    condition_bound_c,
    delta_sweep,
    fundamental_gap,
    gap_path,
    large_gap_regime,
    log_concavity_probe,
    normalized_gap_sandwich,
    path_gap_identity,
    positive_points,
    ratio_max_bound,
    rough_gap_bounds,
    shih_report,
    sturm_compare_i,
    sturm_compare_ii,
    sturm_envelopes,
    validate_frame_hessian,
)

ORACLE_RTOL = 1e-7
DELTA_SPREAD = 0.2


def default_domains() -> list[DomainParams]:
    out = [
        DomainParams.symmetric(c, ts)
        for c in (0.05, 0.1, 0.2, 0.4)
        for ts in (math.pi / 4, 1.0, 1.3)
    ]
    out += [
        DomainParams(0.2, math.pi / 4, 5 * math.pi / 8),
        DomainParams(0.2, 0.6, 2.0),
        DomainParams(0.3, 1.0, 1.9),
        DomainParams(1.0, 0.7, 2.2),
    ]
    return out


def corrupted_solver(factor: float = 1.0 + 1e-6):
    """An eigensolver that misreports every eigenvalue by ``factor``; for harness self-tests."""

    def solver(p, k=1, normalization="unitL2"):
        pair = solve_eigen(p, k, normalization)
        return replace(pair, lam=pair.lam * factor)

    return solver


@dataclass
class VerificationSummary:
    checks_run: int = 0
    failures: list[tuple[str, str, str]] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)
    large_gap_witnesses: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, name: str, domain, ok: bool, detail: str = "") -> None:
        self.checks_run += 1
        if not ok:
            self.failures.append((name, str(domain), detail))

    def run(self, name: str, domain, fn) -> None:
        """Run ``fn``; it returns ``(ok, detail)`` or raises on invariant failure."""
        try:
            ok, detail = fn()
        except (InvariantViolation, InvalidRegime, ArithmeticError, RuntimeError, ValueError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        self.record(name, domain, ok, detail)


def _label(d: DomainParams) -> str:
    return f"(c={d.c:.6g}, theta0={d.theta0:.6g}, theta1={d.theta1:.6g})"


def _domain_checks(s: VerificationSummary, d: DomainParams, solver, grid_size: int, n_t: int) -> None:
    name = _label(d)
    c2 = d.c**2
    rep = fundamental_gap(d, grid_size, solver)
    entry = {"domain": name, "normalized_gap": rep.normalized_gap}
    if rep.normalized_gap < 1.0:
        s.witnesses.append(entry)
    else:
        s.large_gap_witnesses.append(entry)

    def eig():
        b11 = eigen_bounds(AngularProblem(c2, d.theta0, d.theta1), 1)
        b14 = eigen_bounds(AngularProblem(4 * c2, d.theta0, d.theta1), 1)
        b21 = eigen_bounds(AngularProblem(c2, d.theta0, d.theta1), 2)
        vals = ((rep.lambda1, b11), (rep.lambda1_4c2, b14), (rep.lambda2_c2, b21))
        ok = all(lo < v <= hi * (1 + 1e-12) for v, (lo, hi) in vals)
        return ok, f"{vals}"

    s.run("eigenvalue-sandwich", name, eig)

    cond = condition_bound_c(d)
    if cond:
        s.run("radial-branch", name, lambda: (rep.lambda1_4c2 <= rep.lambda2_c2,
                                               f"{rep.lambda1_4c2} vs {rep.lambda2_c2}"))

        def rough():
            lo, hi = rough_gap_bounds(d)
            m = 1e-9 * c2
            return lo + m < rep.gap < hi - m, f"gap {rep.gap} in ({lo}, {hi})"

        s.run("rough-gap", name, rough)

        def sandwich():
            lo, hi = normalized_gap_sandwich(d)
            return lo < rep.normalized_gap < hi, f"{rep.normalized_gap} in ({lo}, {hi})"

        s.run("normalized-gap-sandwich", name, sandwich)

        samples = gap_path(d, n_t, grid_size, solver)

        def identity():
            res = path_gap_identity(d, samples=samples)
            consistent = abs(res.lhs - rep.gap) <= 1e-9 * rep.gap
            return consistent, f"residual {res.residual:.2e}, path gap {res.lhs} vs {rep.gap}"

        s.run("path-identity", name, identity)

        def ratio():
            max_r, delta = ratio_max_bound(d, samples=samples)
            ts = d.theta_star
            inside = all(math.sin(ts) ** 2 < p.ratio < 1.0 for p in samples)
            return inside and delta > 0.0, f"max R {max_r}"

        s.run("ratio-bound", name, ratio)

    def diam():
        dr = diameter(d)
        ratio = math.pi**2 / (c2 * dr.diameter**2)
        k = d.c / math.pi
        log_csc = -math.log(math.sin(d.theta_star))
        lo = (1 + k * (2 * log_csc + dr.eta)) ** -2
        hi = (1 + k * log_csc) ** -2
        ok = dr.bounds_hold() and lo * (1 - 1e-12) <= ratio <= hi * (1 + 1e-12)
        ok = ok and abs(dr.diameter - rep.diameter) == 0.0
        return ok, f"D={dr.diameter}, bounds [{dr.lower_bound}, {dr.upper_bound}]"

    s.run("diameter-sandwich", name, diam)

    for t in (0.0, 0.5, 1.0):
        def env(t=t):
            v = sturm_envelopes(d, t, grid_size, strict=False, solver=solver)
            return v.holds, f"t={t}: {v.max_lower_violation:.2e}, {v.max_upper_violation:.2e}"

        s.run("envelopes", name, env)

    def zero_bracket():
        checks = alternative_lemma_proof_check(d, c2)
        return all(ch.passed for ch in checks), f"{checks[0]}"

    s.run("bracket-from-zeros", name, zero_bracket)

    for k in (1, 2, 3):
        def oracle(k=k):
            p = AngularProblem(c2, d.theta0, d.theta1, grid_size)
            a = solver(p, k).lam
            b = oracle_fd(p, k).lam
            rel = abs(a - b) / abs(b)
            return rel <= ORACLE_RTOL, f"k={k}: shooting {a}, fd {b}, rel {rel:.2e}"

        s.run("oracle-equivalence", name, oracle)


def _global_checks(s: VerificationSummary, solver, grid_size: int, n_t: int) -> None:
    def sturm_self():
        z = sturm_compare_i(4.0, 1.0, length=4.0)
        same = sturm_compare_i(2.0, 2.0, length=4.0)
        sol = sturm_compare_ii(1.0, 0.0, math.pi / 2)
        ok = (abs(z.x1 - math.pi / 2) < 1e-9 and abs(z.x2 - math.pi) < 1e-9 and z.holds
              and same.equal and sol.holds)
        return ok, f"{z}"

    s.run("sturm-self-test", "constants", sturm_self)
    s.run("frame-hessian", "random points", lambda: (validate_frame_hessian() < 1e-5, ""))

    def delta():
        ds = delta_sweep(math.pi / 4, 3 * math.pi / 4, n_t=n_t, grid_size=grid_size, solver=solver)
        vals = list(ds.values())
        spread = (max(vals) - min(vals)) / min(vals)
        return min(vals) > 0 and spread <= DELTA_SPREAD, f"deltas {ds}"

    s.run("ratio-c-independence", "(pi/4, 3pi/4)", delta)

    def diameter_limit():
        cs = (0.4, 0.2, 0.1, 0.05, 0.01)
        vals = [math.pi**2 / (c * c * diameter(DomainParams.symmetric(c, math.pi / 4)).diameter ** 2) for c in cs]
        ok = all(a < b for a, b in zip(vals, vals[1:])) and vals[-1] >= 0.95 and vals[-1] < 1
        return ok, f"{vals}"

    s.run("diameter-limit", "theta*=pi/4", diameter_limit)

    def large():
        v = large_gap_regime(4.0, 1.45, grid_size, solver)
        return v.holds and v.report.normalized_gap > v.sandwich_lower, f"{v.report.normalized_gap}"

    s.run("large-gap-regime", "(c=4, theta*=1.45)", large)

    def shih():
        cert = shih_report(grid_size=grid_size, solver=solver)
        return cert.passed, f"margin {cert.margin}"

    s.run("shih-certificate", "(c=0.2, pi/4, 5pi/8)", shih)

    def probe():
        lam, probes = log_concavity_probe(DomainParams(0.2, math.pi / 4, 5 * math.pi / 8), solver=solver)
        worst = max(abs(p.trace_residual_terms + lam) for p in probes if not p.skipped)
        return worst <= 1e-6, f"trace residual {worst:.2e}, positive points {len(positive_points(probes))}"

    s.run("hessian-trace-identity", "(c=0.2, pi/4, 5pi/8)", probe)


def run_verification(domains: list[DomainParams] | None = None, solver=solve_eigen,
                     grid_size: int = 2000, n_t: int = 33) -> VerificationSummary:
    s = VerificationSummary()
    for d in domains if domains is not None else default_domains():
        try:
            _domain_checks(s, d, solver, grid_size, n_t)
        except (InvariantViolation, RuntimeError, ValueError) as exc:
            s.record("domain", _label(d), False, f"{type(exc).__name__}: {exc}")
    _global_checks(s, solver, grid_size, n_t)
    return s
