"""First two Dirichlet eigenvalues of a sector and its fundamental gap."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from ..angular import AngularProblem, solve_eigen
from ..hypgeo import DiameterReport, DomainParams, diameter, diameter_bounds
from .errors import InvalidRegime, PreconditionError

RADIAL = "radialSignChange"
ANGULAR = "angularSignChange"


@dataclass(frozen=True)
class GapReport:
    domain: DomainParams
    lambda1: float
    lambda1_4c2: float
    lambda2_c2: float
    lambda2: float
    branch: str
    gap: float
    diameter: float
    normalized_gap: float
    condition_bound_c: bool
    diameter_report: DiameterReport | None = None

    @property
    def theta_star(self) -> float:
        return self.domain.theta_star


def condition_bound_c(d: DomainParams) -> bool:
    """True when the second eigenvalue is guaranteed to come from the radial branch.

    ``th* > pi/6`` and ``pi^2/L^2 (4 sin^2 th* - 1)/(4 - sin^2 th*) >= c^2``.
    """
    ts = d.theta_star
    if not ts > math.pi / 6:
        return False
    s2 = math.sin(ts) ** 2
    return (math.pi / d.width) ** 2 * (4.0 * s2 - 1.0) / (4.0 - s2) >= d.c**2


def angular_problem(d: DomainParams, mu: float, grid_size: int = 2000) -> AngularProblem:
    return AngularProblem(mu, d.theta0, d.theta1, grid_size)


def fundamental_gap(d: DomainParams, grid_size: int = 2000, solver=solve_eigen) -> GapReport:
    """lambda_1 and lambda_2 = min(lambda_1^{4c^2}, lambda_2^{c^2}), diameter and gap.

    Both candidates for the second eigenvalue are always computed.
    """
    c2 = d.c**2
    lam1 = solver(angular_problem(d, c2, grid_size), 1).lam
    lam1_4 = solver(angular_problem(d, 4.0 * c2, grid_size), 1).lam
    lam2_1 = solver(angular_problem(d, c2, grid_size), 2).lam
    lam2 = min(lam1_4, lam2_1)
    branch = RADIAL if lam1_4 <= lam2_1 else ANGULAR
    drep = diameter(d)
    gap = lam2 - lam1
    return GapReport(
        domain=d,
        lambda1=lam1,
        lambda1_4c2=lam1_4,
        lambda2_c2=lam2_1,
        lambda2=lam2,
        branch=branch,
        gap=gap,
        diameter=drep.diameter,
        normalized_gap=gap * drep.diameter**2 / (3.0 * math.pi**2),
        condition_bound_c=condition_bound_c(d),
        diameter_report=drep,
    )


def rough_gap_bounds(d: DomainParams) -> tuple[float, float]:
    """``(3 sin^2(th*) c^2, 3 c^2)``; only valid under :func:`condition_bound_c`."""
    if not condition_bound_c(d):
        raise InvalidRegime(f"rough gap bounds need the radial-branch condition: {d}")
    c2 = d.c**2
    return 3.0 * math.sin(d.theta_star) ** 2 * c2, 3.0 * c2


def normalized_gap_sandwich(d: DomainParams) -> tuple[float, float]:
    """Bounds on ``gap D^2 / (3 pi^2)`` from the rough gap and diameter estimates."""
    if not condition_bound_c(d):
        raise InvalidRegime(f"sandwich needs the radial-branch condition: {d}")
    eta = diameter_bounds(d)[2]
    ts = d.theta_star
    log_csc = -math.log(math.sin(ts))
    k = d.c / math.pi
    lower = math.sin(ts) ** 2 * (1.0 + k * log_csc) ** 2
    upper = (1.0 + k * (2.0 * log_csc + eta)) ** 2
    return lower, upper


def shih_c2_bound() -> float:
    """Upper bound on ``c^2`` in Shih's family, with ``cot(19 pi/40) = tan(pi/40)``."""
    ct = math.tan(math.pi / 40)
    return (math.pi / 5) * ct / (1.0 + (math.pi / 40) * ct)


@dataclass(frozen=True)
class ShihCertificate:
    report: GapReport
    half_bound: float  # 3 pi^2 / (2 D^2)
    margin: float  # gap / half_bound - 1
    rough_lower: float  # 3/2 c^2
    c2_exceeds_pi2_over_d2: bool

    @property
    def passed(self) -> bool:
        return self.margin > 0.0 and self.report.gap >= self.rough_lower and self.c2_exceeds_pi2_over_d2


def shih_report(theta1: float = 5 * math.pi / 8, c: float = 0.2, grid_size: int = 2000,
                solver=solve_eigen) -> ShihCertificate:
    """Gap of Shih's sector ``theta0 = pi/4`` against ``3 pi^2 / (2 D^2)``."""
    if not (math.pi / 2 < theta1 < 3 * math.pi / 4):
        raise PreconditionError(f"theta1 must lie in (pi/2, 3pi/4), got {theta1}")
    if not (c > 0.0 and c * c < shih_c2_bound()):
        raise PreconditionError(f"c^2 must be below {shih_c2_bound():.6g}, got c={c}")
    d = DomainParams(c, math.pi / 4, theta1)
    rep = fundamental_gap(d, grid_size, solver)
    half = 1.5 * math.pi**2 / rep.diameter**2
    return ShihCertificate(
        report=rep,
        half_bound=half,
        margin=rep.gap / half - 1.0,
        rough_lower=1.5 * c * c,
        c2_exceeds_pi2_over_d2=c * c > math.pi**2 / rep.diameter**2,
    )


def large_gap_threshold(c: float) -> float:
    """Smallest ``th*`` for which the symmetric sector meets both large-gap conditions.

    Those are ``sin th* >= exp(pi/c - 1)`` and the radial-branch condition,
    each monotone in ``th*``.
    """
    if not c > math.pi:
        raise InvalidRegime(f"large-gap regime needs c > pi, got {c}")
    theta_a = math.asin(math.exp(math.pi / c - 1.0))

    def slack(ts):
        s2 = math.sin(ts) ** 2
        return (math.pi / (math.pi - 2 * ts)) ** 2 * (4 * s2 - 1) / (4 - s2) - c * c

    lo, hi = math.pi / 6 + 1e-12, math.pi / 2 - 1e-9
    theta_b = brentq(slack, lo, hi, xtol=1e-15) if slack(lo) < 0 else lo
    return max(theta_a, theta_b)


@dataclass(frozen=True)
class LargeGapVerdict:
    report: GapReport
    sandwich_lower: float
    holds: bool


def large_gap_regime(c: float, theta_star: float, grid_size: int = 2000,
                     solver=solve_eigen) -> LargeGapVerdict:
    """Gap of the symmetric sector in the regime where it exceeds ``3 pi^2 / D^2``."""
    if not c > math.pi:
        raise InvalidRegime(f"large-gap regime needs c > pi, got {c}")
    if not math.sin(theta_star) >= math.exp(math.pi / c - 1.0):
        raise InvalidRegime(
            f"need sin(theta*) >= exp(pi/c - 1) = {math.exp(math.pi / c - 1.0):.6g}, "
            f"got theta*={theta_star}"
        )
    d = DomainParams.symmetric(c, theta_star)
    if not condition_bound_c(d):
        raise InvalidRegime(f"radial-branch condition fails for theta*={theta_star}, c={c}")
    rep = fundamental_gap(d, grid_size, solver)
    lower, _ = normalized_gap_sandwich(d)
    return LargeGapVerdict(rep, lower, rep.normalized_gap > 1.0)
