"""Covariant Hessian of ``log u1`` in the orthonormal frame ``e1 = r sin(theta) d_r``,
``e2 = sin(theta) d_theta``.

With ``Gamma_11^2 = -Gamma_12^1 = cos(theta)`` the frame components of the
Hessian of a function ``v`` are

    v11 = sin^2 (r^2 v_rr + r v_r) - sin cos v_theta
    v12 = sin^2 (r v_rtheta) + sin cos (r v_r)
    v22 = sin^2 v_thetatheta + sin cos v_theta

Radial derivatives enter only through ``r v_r``, ``r^2 v_rr`` and
``r v_rtheta``, so points with ``log r`` beyond the float range are fine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..angular import AngularProblem, solve_eigen
from ..hypgeo import DomainParams
from .errors import InvariantViolation

SKIP_LEVEL = 1e-8


@dataclass(frozen=True)
class HessianProbe:
    r_log: float  # log r
    theta: float
    log_u: float
    H11: float
    H12: float
    H22: float
    grad_sq: float
    max_eigenvalue: float
    skipped: bool = False

    @property
    def trace_residual_terms(self) -> float:
        return self.H11 + self.H22 + self.grad_sq


def frame_hessian(theta, rv_r, r2v_rr, rv_rt, v_t, v_tt):
    """``(H11, H12, H22, |grad v|^2)`` from scaled (r, theta) partial derivatives."""
    s = np.sin(theta)
    c = np.cos(theta)
    h11 = s * s * (r2v_rr + rv_r) - s * c * v_t
    h12 = s * s * rv_rt + s * c * rv_r
    h22 = s * s * v_tt + s * c * v_t
    grad_sq = s * s * (rv_r * rv_r + v_t * v_t)
    return h11, h12, h22, grad_sq


def max_eigenvalue(h11, h12, h22):
    mean = 0.5 * (h11 + h22)
    return mean + np.hypot(0.5 * (h11 - h22), h12)


def _test_function(r, t):
    """A smooth test function and its partials, used to validate the frame formulas."""
    lr = np.log(r)
    v = lr**2 * np.sin(t) + r * np.cos(2 * t)
    v_r = 2 * lr * np.sin(t) / r + np.cos(2 * t)
    v_rr = (2 - 2 * lr) * np.sin(t) / r**2
    v_t = lr**2 * np.cos(t) - 2 * r * np.sin(2 * t)
    v_tt = -(lr**2) * np.sin(t) - 4 * r * np.cos(2 * t)
    v_rt = 2 * lr * np.cos(t) / r - 2 * np.sin(2 * t)
    return v, v_r, v_rr, v_t, v_tt, v_rt


def _v_cartesian(x, y):
    return _test_function(np.hypot(x, y), np.arctan2(y, x))[0]


def validate_frame_hessian(n_points: int = 10, seed: int = 0, step: float = 1e-4,
                           rtol: float = 1e-5) -> float:
    """Check the frame Hessian against second differences along geodesics.

    For a unit vector ``X = cos(phi) e1 + sin(phi) e2`` at ``p``, the geodesic
    through ``p`` with velocity ``X`` is expanded to second order using the
    half-plane geodesic equations ``x'' = 2x'y'/y``, ``y'' = (y'^2 - x'^2)/y``;
    ``(g(s) + g(-s) - 2 g(0)) / s^2`` of ``g = v o gamma`` then equals
    ``Hess v(X, X)`` up to ``O(s^2)``. Returns the largest relative error and
    raises :class:`InvariantViolation` above ``rtol``.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        r = rng.uniform(0.5, 3.0)
        t = rng.uniform(0.3, math.pi - 0.3)
        phi = rng.uniform(0.0, 2 * math.pi)
        _, v_r, v_rr, v_t, v_tt, v_rt = _test_function(r, t)
        h11, h12, h22, _ = frame_hessian(t, r * v_r, r * r * v_rr, r * v_rt, v_t, v_tt)
        a, b = math.cos(phi), math.sin(phi)
        frame_value = a * a * h11 + 2 * a * b * h12 + b * b * h22

        x, y = r * math.cos(t), r * math.sin(t)
        # e1 = y (cos t, sin t), e2 = y (-sin t, cos t) in cartesian components
        vx = y * (a * math.cos(t) - b * math.sin(t))
        vy = y * (a * math.sin(t) + b * math.cos(t))
        ax = 2 * vx * vy / y
        ay = (vy * vy - vx * vx) / y

        def g(s):
            return _v_cartesian(x + s * vx + 0.5 * s * s * ax, y + s * vy + 0.5 * s * s * ay)

        fd_value = (g(step) + g(-step) - 2 * g(0.0)) / step**2
        err = abs(fd_value - frame_value) / max(1.0, abs(frame_value))
        worst = max(worst, err)
    if worst > rtol:
        raise InvariantViolation(f"frame Hessian disagrees with geodesic differences: {worst:.3e}")
    return worst


@lru_cache(maxsize=None)
def _validated_once() -> float:
    return validate_frame_hessian()


def log_concavity_probe(d: DomainParams, grid_r: int = 40, grid_theta: int = 40,
                        solver=solve_eigen) -> tuple[float, list[HessianProbe]]:
    """Evaluate the Hessian of ``log u1``, ``u1 = sin(c log r) h1(theta)``, on interior points.

    The points are ``grid_r x grid_theta`` uniformly spaced interior values
    of ``(log r, theta)``. ``h1''`` comes from the equation itself. Points
    where ``u1 < 1e-8 max u1`` are returned with ``skipped=True``.
    Returns ``(lambda1, probes)``.
    """
    _validated_once()
    mult = max(1, math.ceil(2000 / (grid_theta + 1)))
    p = AngularProblem(d.c**2, d.theta0, d.theta1, (grid_theta + 1) * mult)
    pair = solver(p, 1, normalization="unitSlope")
    lam = pair.lam
    idx = np.arange(1, grid_theta + 1) * mult
    theta = pair.h.nodes[idx]
    h = pair.h.values[idx]
    dh = pair.h.derivative[idx]
    h_max = pair.h.max_abs()
    d2h = (d.c**2 - lam / np.sin(theta) ** 2) * h

    s_vals = np.arange(1, grid_r + 1) * (math.pi / d.c) / (grid_r + 1)
    probes = []
    for s in s_vals:
        cs = d.c * s
        radial = math.sin(cs)
        rv_r = d.c * math.cos(cs) / radial
        r2v_rr = -(d.c**2) / radial**2 - rv_r
        for th, hv, dhv, d2hv in zip(theta, h, dh, d2h):
            u = radial * hv
            if not u > SKIP_LEVEL * h_max:
                probes.append(HessianProbe(s, th, math.nan, math.nan, math.nan, math.nan,
                                           math.nan, math.nan, True))
                continue
            q = dhv / hv
            h11, h12, h22, gsq = frame_hessian(th, rv_r, r2v_rr, 0.0, q, d2hv / hv - q * q)
            probes.append(HessianProbe(s, float(th), math.log(u), float(h11), float(h12),
                                       float(h22), float(gsq), float(max_eigenvalue(h11, h12, h22))))
    return lam, probes


def positive_points(probes: list[HessianProbe]) -> list[HessianProbe]:
    return [pr for pr in probes if not pr.skipped and pr.max_eigenvalue > 0.0]
