import math

import numpy as np
import pytest

from hypergap.angular import solve_eigen
from hypergap.hypgeo import DomainParams
from hypergap.spectrum import (
    ANGULAR,
    RADIAL,
    InvalidRegime,
    InvariantViolation,
    PreconditionError,
    condition_bound_c,
    delta_sweep,
    envelope_constants,
    fundamental_gap,
    gap_path,
    large_gap_regime,
    large_gap_threshold,
    normalized_gap_sandwich,
    path_gap_identity,
    ratio_max_bound,
    rough_gap_bounds,
    shih_c2_bound,
    shih_report,
    sturm_envelopes,
)
from oracles import brute_diameter, galerkin_eigs

PI = math.pi
WITNESS = DomainParams.symmetric(0.2, PI / 4)


def oracle_normalized_gap(c, t0, t1):
    c2 = c * c
    lam1 = galerkin_eigs(c2, t0, t1, 160, 800)[0]
    lam2 = min(galerkin_eigs(4 * c2, t0, t1, 160, 800)[0], galerkin_eigs(c2, t0, t1, 160, 800)[1])
    D = brute_diameter(c, t0, t1, 60)
    return lam2 - lam1, (lam2 - lam1) * D * D / (3 * PI**2)


def test_condition_threshold_quarter():
    # pi^2/L^2 (4 sin^2 - 1)/(4 - sin^2) = 4 * (1/3.5) = 8/7
    limit = math.sqrt(8 / 7)
    assert condition_bound_c(DomainParams.symmetric(limit * (1 - 1e-9), PI / 4))
    assert not condition_bound_c(DomainParams.symmetric(limit * (1 + 1e-9), PI / 4))


def test_condition_fails_at_sixth():
    assert not condition_bound_c(DomainParams.symmetric(1e-6, PI / 6))


def test_condition_shih_parameters():
    assert condition_bound_c(DomainParams(math.sqrt(0.049), PI / 4, 5 * PI / 8))


@pytest.mark.parametrize("c,ts", [(0.2, PI / 4), (0.05, 1.0), (0.4, 1.3), (1.0, 1.2)])
def test_radial_branch_under_condition(c, ts):
    d = DomainParams.symmetric(c, ts)
    assert condition_bound_c(d)
    rep = fundamental_gap(d)
    assert rep.branch == RADIAL
    assert rep.lambda1_4c2 <= rep.lambda2_c2


def test_angular_branch_when_condition_fails():
    # wide angle and large c: a sign change in the angle is cheaper
    d = DomainParams(3.0, 0.2, 2.9)
    assert not condition_bound_c(d)
    rep = fundamental_gap(d)
    assert rep.branch == ANGULAR
    assert rep.lambda2 == rep.lambda2_c2


def test_witness_gap_values():
    rep = fundamental_gap(WITNESS)
    gap, ng = oracle_normalized_gap(0.2, PI / 4, 3 * PI / 4)
    assert rep.gap == pytest.approx(gap, rel=1e-9)
    assert rep.normalized_gap == pytest.approx(ng, rel=1e-9)
    assert rep.normalized_gap < 1 - 1e-3
    lo, hi = rough_gap_bounds(WITNESS)
    assert (lo, hi) == pytest.approx((0.06, 0.12), rel=1e-14)
    assert lo < rep.gap < hi


def test_rough_bounds_pinch():
    d = DomainParams.symmetric(0.3, PI / 2 - 1e-7)
    lo, hi = rough_gap_bounds(d)
    assert lo == pytest.approx(hi, rel=1e-12)
    assert hi == pytest.approx(3 * 0.09, rel=1e-15)


def test_rough_bounds_need_condition():
    with pytest.raises(InvalidRegime):
        rough_gap_bounds(DomainParams(3.0, 0.2, 2.9))


@pytest.mark.parametrize("c,ts", [(0.2, PI / 4), (0.1, 1.0), (0.4, 1.3), (2.0, 1.4)])
def test_normalized_sandwich(c, ts):
    d = DomainParams.symmetric(c, ts)
    lo, hi = normalized_gap_sandwich(d)
    assert lo < fundamental_gap(d).normalized_gap < hi


def test_path_endpoints():
    samples = gap_path(WITNESS, 9)
    c2 = 0.04
    assert samples[0].mu == pytest.approx(c2, rel=1e-15) and samples[-1].mu == pytest.approx(4 * c2, rel=1e-15)
    rep = fundamental_gap(WITNESS)
    assert samples[0].lam == pytest.approx(rep.lambda1, rel=1e-9)
    assert samples[-1].lam == pytest.approx(rep.lambda1_4c2, rel=1e-9)
    s2 = math.sin(PI / 4) ** 2
    assert all(s2 < s.ratio < 1 for s in samples)


def test_path_slope_matches_ratio():
    d = DomainParams(0.2, 0.6, 2.0)
    samples = gap_path(d, 33)
    t = np.array([s.t for s in samples])
    lam = np.array([s.lam for s in samples])
    # fourth-order central differences at interior nodes
    h = t[1] - t[0]
    slope = (-lam[4:] + 8 * lam[3:-1] - 8 * lam[1:-3] + lam[:-4]) / (12 * h)
    expected = 3 * 0.04 * np.array([s.ratio for s in samples])[2:-2]
    np.testing.assert_allclose(slope, expected, rtol=1e-5)


@pytest.mark.parametrize("d", [WITNESS, DomainParams(0.2, 0.6, 2.0), DomainParams.symmetric(0.05, 1.0),
                               DomainParams(1.0, 1.0, 2.0)])
def test_path_identity(d):
    res = path_gap_identity(d)
    assert res.residual <= 1e-5
    assert res.lhs <= res.max_ratio_bound < 3 * d.c**2


def test_path_rejects_bad_regime():
    with pytest.raises(InvalidRegime):
        gap_path(DomainParams(3.0, 0.2, 2.9))
    with pytest.raises(ValueError):
        gap_path(WITNESS, 5)


def test_ratio_near_right_angle():
    d = DomainParams.symmetric(0.2, PI / 2 - 1e-3)
    max_r, delta = ratio_max_bound(d, 9)
    assert max_r == pytest.approx(1.0, abs=1e-5)
    assert 0 < delta < 1e-5


def test_delta_independent_of_c():
    deltas = delta_sweep(PI / 4, 3 * PI / 4)
    vals = list(deltas.values())
    assert min(vals) > 0
    assert (max(vals) - min(vals)) / min(vals) <= 0.2
    assert deltas[0.2] == pytest.approx(0.0878, abs=5e-4)


def test_envelope_constants_quarter():
    sigma1, sigma2, theta_tilde = envelope_constants(WITNESS)
    assert sigma2 == pytest.approx(0.5 * 4 - 0.5 * 0.16, rel=1e-14)
    assert theta_tilde == pytest.approx(PI / math.sqrt(sigma1) + PI / 4, rel=1e-15)
    assert theta_tilde < WITNESS.theta1


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0])
def test_envelopes_hold_in_proof_direction(t):
    v = sturm_envelopes(DomainParams(0.2, PI / 4, 5 * PI / 8), t)
    assert v.lower_holds and v.upper_holds
    # the opposite reading of the lower envelope does not hold
    assert not v.reverse_lower_holds


def test_envelope_strict_raises_on_failure():
    def bad_solver(p, k=1, normalization="unitL2"):
        pair = solve_eigen(p, k, normalization)
        return type(pair)(pair.lam, pair.k, pair.h.scaled(10.0), pair.normalization, pair.problem)

    with pytest.raises(InvariantViolation):
        sturm_envelopes(WITNESS, 0.0, solver=bad_solver)
    with pytest.raises(ValueError):
        sturm_envelopes(WITNESS, 1.5)


def test_shih_bound_value():
    assert shih_c2_bound() == pytest.approx(0.049146, abs=5e-7)
    assert shih_c2_bound() < 0.0492


def test_shih_certificate():
    cert = shih_report()
    assert cert.passed
    assert cert.margin >= 1e-3
    assert cert.report.gap > 1.5 * 0.04
    assert cert.c2_exceeds_pi2_over_d2


def test_shih_preconditions():
    with pytest.raises(PreconditionError):
        shih_report(c=0.23)
    with pytest.raises(PreconditionError):
        shih_report(theta1=2.4)


def test_large_gap_threshold_at_four():
    # the condition on sin(th*) alone gives th* >= asin(exp(pi/4 - 1))
    assert math.asin(math.exp(PI / 4 - 1)) == pytest.approx(0.93882, abs=1e-5)
    ts = large_gap_threshold(4.0)
    assert ts > math.asin(math.exp(PI / 4 - 1))
    assert condition_bound_c(DomainParams.symmetric(4.0, ts + 1e-9))
    assert not condition_bound_c(DomainParams.symmetric(4.0, ts - 1e-6))


def test_large_gap_regime():
    v = large_gap_regime(4.0, 1.45)
    assert v.holds
    assert v.report.normalized_gap > 1 + 1e-3
    assert v.report.normalized_gap > v.sandwich_lower
    _, ng = oracle_normalized_gap(4.0, 1.45, PI - 1.45)
    assert v.report.normalized_gap == pytest.approx(ng, rel=1e-9)


def test_large_gap_rejects():
    with pytest.raises(InvalidRegime):
        large_gap_regime(3.0, 1.45)
    with pytest.raises(InvalidRegime):
        large_gap_regime(4.0, 0.9)
    with pytest.raises(InvalidRegime):
        large_gap_regime(4.0, 1.1)
