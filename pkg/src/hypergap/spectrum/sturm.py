"""Numerical checks of the two Sturm comparison theorems for ``f'' + b f = 0``.

Coefficients are given as a :class:`GridFunction` (interpolated by a cubic
spline), a callable of the independent variable, or a constant. All
solutions start from ``f(x0) = 0, f'(x0) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from ..angular import AngularProblem, GridFunction, eigen_bounds, solve_eigen
from ..hypgeo import DomainParams
from .errors import InvariantViolation, PreconditionError

RTOL = 1e-12
ATOL = 1e-14
ORDER_TOL = 1e-9


def _coefficient(b):
    if isinstance(b, GridFunction):
        if b.nodes.size >= 4:
            return CubicSpline(b.nodes, b.values, extrapolate=True)
        return lambda x: np.interp(x, b.nodes, b.values)
    if callable(b):
        return b
    value = float(b)
    return lambda x: value


def _span(b1, b2, x0, length):
    if length is not None:
        return x0, x0 + length
    ends = [g.nodes[-1] for g in (b1, b2) if isinstance(g, GridFunction)]
    if not ends:
        raise ValueError("length is required when neither coefficient is a GridFunction")
    return x0, min(ends)


def _left(b1, b2, x0):
    starts = {float(g.nodes[0]) for g in (b1, b2) if isinstance(g, GridFunction)}
    if len(starts) > 1:
        raise PreconditionError("coefficients must share their left endpoint")
    if starts:
        return starts.pop()
    return x0


def _solve(coef, a, b, t_eval=None, find_zero=False):
    def rhs(x, y):
        return [y[1], -coef(x) * y[0]]

    events = None
    if find_zero:
        def zero(x, y):
            return y[0]

        zero.terminal = True
        zero.direction = -1
        events = zero
    sol = solve_ivp(rhs, (a, b), [0.0, 1.0], method="DOP853", rtol=RTOL, atol=ATOL,
                    t_eval=t_eval, events=events)
    if sol.status == -1:
        raise RuntimeError(f"comparison integration failed: {sol.message}")
    return sol


def first_zero(b, x0: float, x_end: float) -> float:
    """First zero of the unit-slope solution after ``x0``; ``inf`` if none before ``x_end``."""
    sol = _solve(_coefficient(b), x0, x_end, find_zero=True)
    hits = sol.t_events[0]
    return float(hits[0]) if hits.size else math.inf


def _check_ordered(c1, c2, a, b, n=401):
    x = np.linspace(a, b, n)
    v1 = np.broadcast_to(np.asarray(c1(x), dtype=float), x.shape)
    v2 = np.broadcast_to(np.asarray(c2(x), dtype=float), x.shape)
    scale = max(1.0, float(np.max(np.abs(v1))), float(np.max(np.abs(v2))))
    if np.any(v1 < v2 - 1e-12 * scale):
        raise PreconditionError("comparison needs b1 >= b2 pointwise")


@dataclass(frozen=True)
class ZeroComparison:
    x1: float
    x2: float
    conclusive: bool
    holds: bool
    equal: bool


def sturm_compare_i(b1, b2, length: float | None = None, x0: float = 0.0) -> ZeroComparison:
    """First zeros ``x1``, ``x2`` of the two unit-slope solutions; ``b1 >= b2`` gives ``x1 <= x2``.

    If either solution has no zero in the range, the verdict is
    inconclusive rather than an error.
    """
    x0 = _left(b1, b2, x0)
    a, end = _span(b1, b2, x0, length)
    c1, c2 = _coefficient(b1), _coefficient(b2)
    _check_ordered(c1, c2, a, end)
    z1 = first_zero(c1, a, end)
    z2 = first_zero(c2, a, end)
    conclusive = math.isfinite(z1) and math.isfinite(z2)
    scale = max(1.0, abs(z1) if math.isfinite(z1) else 1.0)
    holds = z1 <= z2 + ORDER_TOL * scale if conclusive else math.isfinite(z1) or not math.isfinite(z2)
    equal = conclusive and abs(z1 - z2) <= ORDER_TOL * scale
    return ZeroComparison(z1, z2, conclusive, bool(holds), equal)


@dataclass(frozen=True)
class SolutionComparison:
    x: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    holds: bool
    max_violation: float


def sturm_compare_ii(b1, b2, l: float, x0: float = 0.0, n: int = 2001) -> SolutionComparison:
    """``b1 >= b2`` and ``f1 > 0`` on ``(x0, x0 + l)`` give ``f1 <= f2`` there."""
    x0 = _left(b1, b2, x0)
    c1, c2 = _coefficient(b1), _coefficient(b2)
    _check_ordered(c1, c2, x0, x0 + l)
    x = np.linspace(x0, x0 + l, n)
    f1 = _solve(c1, x0, x0 + l, t_eval=x).y[0]
    f2 = _solve(c2, x0, x0 + l, t_eval=x).y[0]
    inner = slice(1, -1)
    if np.any(f1[inner] <= 0.0):
        raise PreconditionError("f1 must stay positive on the open interval")
    tol = ORDER_TOL * max(1.0, float(np.max(np.abs(f2))))
    diff = f1[inner] - f2[inner]
    worst = float(max(diff.max(), 0.0))
    return SolutionComparison(x, f1, f2, worst <= tol, worst)


@dataclass(frozen=True)
class BracketCheck:
    mu: float
    lam: float
    a1: float
    zero: float  # first zero for the true coefficient, should equal theta1
    a2: float
    ordering_holds: bool
    derived_bounds: tuple[float, float]
    closed_form_bounds: tuple[float, float]
    bounds_agree: bool
    strictly_inside: bool

    @property
    def passed(self) -> bool:
        return self.ordering_holds and self.bounds_agree and self.strictly_inside


def _bracket_single(d: DomainParams, mu: float, grid_size: int) -> BracketCheck:
    p = AngularProblem(mu, d.theta0, d.theta1, grid_size)
    lam = solve_eigen(p, 1).lam
    csc2_star = 1.0 / math.sin(p.theta_star) ** 2
    b1 = lam * csc2_star - mu
    b2 = lam - mu

    def b_true(x):
        # frozen past theta1 so that b2 <= b_true <= b1 on the whole search range
        x = np.minimum(np.maximum(x, d.theta0), d.theta1)
        return lam / np.sin(x) ** 2 - mu

    span = 2.0 * d.width
    first = sturm_compare_i(b1, b_true, length=span, x0=d.theta0)
    second = sturm_compare_i(b_true, b2, length=span, x0=d.theta0)
    if not (first.holds and second.holds):
        raise InvariantViolation(f"zero ordering violated for mu={mu}: {first}, {second}")
    a1, zero = first.x1, first.x2
    # the constant comparison has no singularity, so its zero is searched on its own range
    a2 = first_zero(b2, d.theta0, d.theta0 + 1.5 * math.pi / math.sqrt(b2)) if b2 > 0.0 else math.inf
    ordering = a1 < d.theta1 < a2 and abs(zero - d.theta1) <= 1e-8 * d.width
    # a1 < theta1  <=>  lam > sin^2(th*) (mu + pi^2/L^2);  theta1 < a2  <=>  lam < mu + pi^2/L^2
    top = mu + (math.pi / d.width) ** 2
    derived = (top / csc2_star, top)
    closed = eigen_bounds(p, 1)
    agree = all(abs(u - v) <= 4 * np.finfo(float).eps * abs(v) for u, v in zip(derived, closed))
    return BracketCheck(mu, lam, a1, zero, a2, bool(ordering), derived, closed, agree,
                         closed[0] < lam < closed[1])


def alternative_lemma_proof_check(d: DomainParams, mu: float, n_delta: int = 1,
                                  grid_size: int = 2000) -> list[BracketCheck]:
    """Re-derive the first-eigenvalue bracket from zero comparisons.

    Runs at ``n_delta`` shifts evenly spaced in ``[0, mu]`` (just ``mu`` when
    ``n_delta == 1``): for each, the constant coefficients
    ``lam csc^2(th*) - delta`` and ``lam - delta`` bracket the true one, so
    their first zeros must satisfy ``a1 < theta1 < a2``.
    """
    if mu < 0.0:
        raise ValueError("mu must be non-negative")
    deltas = [mu] if n_delta <= 1 else list(np.linspace(0.0, mu, n_delta))
    return [_bracket_single(d, float(delta), grid_size) for delta in deltas]
