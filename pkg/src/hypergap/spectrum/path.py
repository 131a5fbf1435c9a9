"""Homotopy from the first to the second eigenvalue and its envelope functions.

Along ``mu(t) = c^2 + 3 c^2 t`` the first angular eigenvalue satisfies

    d lambda / dt = 3 c^2 R(t),   R(t) = int h_t^2 / int csc^2 h_t^2,

so integrating ``R`` over ``[0, 1]`` reproduces the gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import simpson

from ..angular import GridFunction, solve_eigen, weighted_integrals
from ..hypgeo import DomainParams
from .errors import InvalidRegime, InvariantViolation
from .gap import angular_problem, condition_bound_c

IDENTITY_RTOL = 1e-5
ENVELOPE_RTOL = 1e-9


@dataclass(frozen=True)
class PathSample:
    t: float
    mu: float
    lam: float
    ratio: float


def _check_path_inputs(d: DomainParams, n_t: int) -> None:
    if not condition_bound_c(d):
        raise InvalidRegime(f"the path ends at the second eigenvalue only under the radial-branch condition: {d}")
    if n_t < 9:
        raise ValueError("need at least 9 path samples")


def path_mu(d: DomainParams, t: float) -> float:
    return d.c**2 * (1.0 + 3.0 * t)


def gap_path(d: DomainParams, n_t: int = 33, grid_size: int = 2000, solver=solve_eigen) -> list[PathSample]:
    """Sample ``lambda(t)`` and ``R(t)`` on a uniform grid of ``n_t`` values of t."""
    _check_path_inputs(d, n_t)
    samples = []
    for t in np.linspace(0.0, 1.0, n_t):
        mu = path_mu(d, t)
        p = angular_problem(d, mu, grid_size)
        pair = solver(p, 1)
        plain, weighted = weighted_integrals(pair.h, p)
        samples.append(PathSample(float(t), mu, pair.lam, plain / weighted))
    return samples


class PathIdentity(NamedTuple):
    lhs: float
    rhs: float
    residual: float
    max_ratio_bound: float


def path_gap_identity(d: DomainParams, n_t: int = 33, grid_size: int = 2000,
                      samples: list[PathSample] | None = None, solver=solve_eigen) -> PathIdentity:
    """Compare ``lambda(1) - lambda(0)`` with ``3 c^2 int_0^1 R dt`` (Simpson in t).

    Also certifies ``lambda(1) - lambda(0) <= 3 c^2 max_t R(t)``.
    """
    if samples is None:
        samples = gap_path(d, n_t, grid_size, solver)
    t = np.array([s.t for s in samples])
    ratio = np.array([s.ratio for s in samples])
    c2 = d.c**2
    lhs = samples[-1].lam - samples[0].lam
    rhs = 3.0 * c2 * float(simpson(ratio, x=t))
    residual = abs(lhs - rhs) / lhs
    bound = 3.0 * c2 * float(ratio.max())
    if residual > IDENTITY_RTOL:
        raise InvariantViolation(f"path identity residual {residual:.3e} exceeds {IDENTITY_RTOL}: {d}")
    if lhs > bound * (1.0 + 1e-12):
        raise InvariantViolation(f"gap {lhs} exceeds 3c^2 max R = {bound}: {d}")
    return PathIdentity(lhs, rhs, residual, bound)


def ratio_max_bound(d: DomainParams, n_t: int = 33, grid_size: int = 2000,
                    samples: list[PathSample] | None = None, solver=solve_eigen) -> tuple[float, float]:
    """``(max_t R(t), delta = 1 - max_t R(t))``."""
    if samples is None:
        samples = gap_path(d, n_t, grid_size, solver)
    max_ratio = max(s.ratio for s in samples)
    if max_ratio >= 1.0:
        raise InvariantViolation(f"ratio reached {max_ratio} >= 1: {d}")
    return max_ratio, 1.0 - max_ratio


def delta_sweep(theta0: float, theta1: float, cs=(0.4, 0.2, 0.1, 0.05), n_t: int = 33,
                grid_size: int = 2000, solver=solve_eigen) -> dict[float, float]:
    """``delta`` of :func:`ratio_max_bound` for each ``c`` at a fixed angular interval."""
    return {c: ratio_max_bound(DomainParams(c, theta0, theta1), n_t, grid_size, solver=solver)[1] for c in cs}


@dataclass(frozen=True)
class Envelopes:
    sigma1: float
    sigma2: float
    theta_tilde: float
    w1: GridFunction
    w2: GridFunction


@dataclass(frozen=True)
class EnvelopeVerdict:
    envelopes: Envelopes
    h: GridFunction
    t: float
    lam: float
    lower_holds: bool  # w1 <= h on (theta0, min(theta_tilde, theta1))
    upper_holds: bool  # h <= w2 on (theta0, theta1)
    max_lower_violation: float
    max_upper_violation: float
    # the reverse reading h <= w1 on (theta0, theta_tilde)
    reverse_lower_holds: bool

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


def _unit_slope_sine(sigma: float, x: np.ndarray) -> np.ndarray:
    if sigma > 0.0:
        k = math.sqrt(sigma)
        return np.sin(k * x) / k
    if sigma < 0.0:
        k = math.sqrt(-sigma)
        return np.sinh(k * x) / k
    return x.copy()


def envelope_constants(d: DomainParams) -> tuple[float, float, float]:
    """``(sigma1, sigma2, theta_tilde)``."""
    ts = d.theta_star
    csc2 = 1.0 / math.sin(ts) ** 2
    base = (math.pi / d.width) ** 2
    c2 = d.c**2
    sigma1 = base * csc2 + (csc2 - 1.0) * 4.0 * c2
    sigma2 = math.sin(ts) ** 2 * base - math.cos(ts) ** 2 * 4.0 * c2
    return sigma1, sigma2, math.pi / math.sqrt(sigma1) + d.theta0


def sturm_envelopes(d: DomainParams, t: float, grid_size: int = 2000, strict: bool = True,
                    solver=solve_eigen) -> EnvelopeVerdict:
    """Compare the unit-slope eigenfunction ``h_t`` with the sinusoids ``w1``, ``w2``.

    ``w1 <= h_t`` on ``(theta0, min(theta_tilde, theta1))`` and
    ``h_t <= w2`` on ``(theta0, theta1)``, pointwise to ``1e-9 max|h_t|``.
    With ``strict`` a failure of either raises :class:`InvariantViolation`.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    sigma1, sigma2, theta_tilde = envelope_constants(d)
    p = angular_problem(d, path_mu(d, t), grid_size)
    pair = solver(p, 1, normalization="unitSlope")
    h = pair.h
    x = h.nodes - d.theta0
    w1 = GridFunction(h.nodes, _unit_slope_sine(sigma1, x))
    w2 = GridFunction(h.nodes, _unit_slope_sine(sigma2, x))
    tol = ENVELOPE_RTOL * h.max_abs()

    interior = (h.nodes > d.theta0) & (h.nodes < d.theta1)
    low = interior & (h.nodes < min(theta_tilde, d.theta1))
    lower_gap = w1.values[low] - h.values[low]  # positive means violation
    upper_gap = h.values[interior] - w2.values[interior]
    max_low = float(max(lower_gap.max(initial=-np.inf), 0.0))
    max_up = float(max(upper_gap.max(initial=-np.inf), 0.0))
    rev = bool(np.all(h.values[low] <= w1.values[low] + tol))
    verdict = EnvelopeVerdict(
        envelopes=Envelopes(sigma1, sigma2, theta_tilde, w1, w2),
        h=h,
        t=t,
        lam=pair.lam,
        lower_holds=max_low <= tol,
        upper_holds=max_up <= tol,
        max_lower_violation=max_low,
        max_upper_violation=max_up,
        reverse_lower_holds=rev,
    )
    if strict and not verdict.holds:
        raise InvariantViolation(
            f"envelope check failed at t={t} for {d}: "
            f"w1-h up to {max_low:.3e}, h-w2 up to {max_up:.3e} (tol {tol:.1e})"
        )
    return verdict
