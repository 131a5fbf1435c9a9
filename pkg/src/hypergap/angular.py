"""The angular eigenproblem ``h'' + lam csc^2(theta) h = mu h`` on ``[theta0, theta1]``.

Dirichlet conditions at both ends. The primary solver is a shooting method:
the initial value problem ``h(theta0) = 0, h'(theta0) = 1`` is integrated
with an adaptive Dormand-Prince scheme, the interior sign changes index the
eigenvalue, and Brent's method pins the root of ``h(theta1; lam)``. A
finite-difference discretisation with one Richardson step serves as an
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from . import _dopri

__all__ = [
    "SolverError",
    "BracketError",
    "AngularProblem",
    "GridFunction",
    "EigenPair",
    "solve_ivp",
    "shoot",
    "solve_eigen",
    "oracle_fd",
    "node_count",
    "eigen_bounds",
    "weighted_integrals",
]

RTOL = 1e-12
ATOL = 1e-14
MAX_STEPS = 2_000_000
MIN_WIDTH = 1e-4
# endpoint band used when counting nodes
NODE_BAND_FRACTION = 1e-3
NODE_BAND_LEVEL = 1e-6

_EMPTY = np.empty(0)


class SolverError(RuntimeError):
    """The integrator or eigensolver failed."""


class BracketError(SolverError):
    """An eigenvalue was found outside its closed-form bounds."""


@dataclass(frozen=True)
class AngularProblem:
    """Parameters of the angular problem.

    ``unit_weight`` replaces ``csc^2`` by 1; it exists for testing against
    the exact sine eigenfunctions.
    """

    mu: float
    theta0: float
    theta1: float
    grid_size: int = 2000
    unit_weight: bool = False

    def __post_init__(self):
        if not (0.0 < self.theta0 < self.theta1 < math.pi):
            raise ValueError(
                f"need 0 < theta0 < theta1 < pi, got ({self.theta0}, {self.theta1})"
            )
        if self.theta1 - self.theta0 < MIN_WIDTH:
            raise ValueError(f"interval narrower than {MIN_WIDTH}")
        if not (self.mu >= 0.0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be finite and non-negative, got {self.mu}")
        if self.grid_size < 2:
            raise ValueError("grid_size must be at least 2")

    @property
    def width(self) -> float:
        return self.theta1 - self.theta0

    @property
    def theta_star(self) -> float:
        return min(self.theta0, math.pi - self.theta1)

    def nodes(self, n: int | None = None) -> np.ndarray:
        n = self.grid_size if n is None else n
        x = np.linspace(self.theta0, self.theta1, n + 1)
        x[-1] = self.theta1
        return x

    def weight(self, theta):
        if self.unit_weight:
            return np.ones_like(np.asarray(theta, dtype=float))
        return 1.0 / np.sin(theta) ** 2

    def with_mu(self, mu: float) -> "AngularProblem":
        return AngularProblem(mu, self.theta0, self.theta1, self.grid_size, self.unit_weight)


@dataclass(frozen=True)
class GridFunction:
    nodes: np.ndarray
    values: np.ndarray
    derivative: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ValueError("nodes and values must be 1-D arrays of equal length")
        if nodes.size < 2 or np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def scaled(self, factor: float) -> "GridFunction":
        der = None if self.derivative is None else self.derivative * factor
        return GridFunction(self.nodes, self.values * factor, der)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class EigenPair:
    lam: float
    k: int
    h: GridFunction
    normalization: str = "unitL2"
    problem: AngularProblem | None = field(default=None, compare=False, repr=False)

    def normalized(self, normalization: str) -> "EigenPair":
        if normalization == self.normalization:
            return self
        h = self.h
        if normalization == "unitSlope":
            factor = 1.0 / h.derivative[0]
        elif normalization == "unitL2":
            factor = 1.0 / math.sqrt(simpson(h.values**2, x=h.nodes))
        else:
            raise ValueError(f"unknown normalization {normalization!r}")
        return EigenPair(self.lam, self.k, h.scaled(factor), normalization, self.problem)


def _integrate(p: AngularProblem, lam: float, nodes: np.ndarray):
    n = nodes.shape[0]
    h = np.empty(n)
    dh = np.empty(n)
    h_end, dh_end, changes, steps, status = _dopri.integrate(
        p.theta0, p.theta1, float(lam), float(p.mu), p.unit_weight,
        RTOL, ATOL, p.width / 20.0, nodes, h, dh, MAX_STEPS,
    )
    if status != _dopri.STATUS_OK:
        raise SolverError(
            f"integration failed (status {status}) after {steps} steps: "
            f"lam={lam}, mu={p.mu}, interval=[{p.theta0}, {p.theta1}]"
        )
    return h_end, dh_end, changes, h, dh


def shoot(p: AngularProblem, lam: float) -> tuple[float, int]:
    """End value ``h(theta1)`` and number of sign changes on ``(theta0, theta1]``."""
    h_end, _, changes, _, _ = _integrate(p, lam, _EMPTY)
    return h_end, changes


def solve_ivp(p: AngularProblem, lam: float) -> GridFunction:
    """Solve ``h'' + (lam w - mu) h = 0`` with ``h(theta0) = 0, h'(theta0) = 1``.

    The solution is sampled on the problem's uniform grid of
    ``grid_size + 1`` nodes; the derivative is kept alongside.
    """
    nodes = p.nodes()
    _, _, _, h, dh = _integrate(p, lam, nodes)
    return GridFunction(nodes, h, dh)


def eigen_bounds(p: AngularProblem, k: int) -> tuple[float, float]:
    """Closed-form bracket ``sin^2(th*) (mu + k^2 pi^2 / L^2) <= lam_k <= mu + k^2 pi^2 / L^2``.

    Uses ``1 <= csc^2 <= csc^2(th*)`` on the interval; for ``k >= 2`` the
    shortest and longest nodal subintervals give the two sides.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    top = p.mu + (k * math.pi / p.width) ** 2
    if p.unit_weight:
        return top, top
    return math.sin(p.theta_star) ** 2 * top, top


def node_count(h: GridFunction) -> int:
    """Sign changes of ``h`` strictly inside the interval.

    Values below ``1e-6 max|h|`` within the first and last 0.1% of the
    interval are ignored so that the boundary zeros are never counted.
    """
    vals = h.values
    scale = h.max_abs()
    if scale == 0.0:
        raise ValueError("node count of an identically zero function")
    x = h.nodes
    band = NODE_BAND_FRACTION * (x[-1] - x[0])
    near_end = (x <= x[0] + band) | (x >= x[-1] - band)
    keep = ~(near_end & (np.abs(vals) <= NODE_BAND_LEVEL * scale)) & (vals != 0.0)
    signs = np.sign(vals[keep])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def solve_eigen(p: AngularProblem, k: int = 1, normalization: str = "unitL2") -> EigenPair:
    """k-th eigenvalue by shooting.

    The bracket starts from :func:`eigen_bounds` (slightly widened), is
    narrowed by bisection on the sign-change count until it isolates the
    k-th eigenvalue, and the root of ``h(theta1; lam)`` is then located with
    Brent's method.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    lower, upper = eigen_bounds(p, k)
    lo = lower * (1.0 - 1e-9)
    hi = upper * (1.0 + 1e-9) + 1e-12
    f_lo, n_lo = shoot(p, lo)
    f_hi, n_hi = shoot(p, hi)
    if n_lo > k - 1 or n_hi < k:
        raise BracketError(
            f"eigenvalue {k} not inside its bounds [{lower}, {upper}] "
            f"(sign changes {n_lo}, {n_hi}); mu={p.mu}, interval=[{p.theta0}, {p.theta1}]"
        )
    for _ in range(200):
        if n_lo == k - 1 and n_hi == k:
            break
        mid = 0.5 * (lo + hi)
        f_mid, n_mid = shoot(p, mid)
        if n_mid <= k - 1:
            lo, f_lo, n_lo = mid, f_mid, n_mid
        else:
            hi, f_hi, n_hi = mid, f_mid, n_mid
    else:
        raise SolverError("bisection on the node count did not isolate the eigenvalue")
    if f_lo == 0.0:
        lam = lo
    elif f_hi == 0.0:
        lam = hi
    else:
        lam = brentq(lambda v: shoot(p, v)[0], lo, hi, xtol=1e-300, rtol=1e-14, maxiter=200)
    h = solve_ivp(p, lam)
    pair = EigenPair(lam, k, h, "unitSlope", p)
    return pair.normalized(normalization)


def weighted_integrals(h: GridFunction, p: AngularProblem) -> tuple[float, float]:
    """``(int h^2, int w h^2)`` by composite Simpson on the grid of ``h``."""
    sq = h.values**2
    return float(simpson(sq, x=h.nodes)), float(simpson(p.weight(h.nodes) * sq, x=h.nodes))


def _fd_eigen(p: AngularProblem, k: int, n: int):
    x = p.nodes(n)
    inner = x[1:-1]
    step = p.width / n
    w = p.weight(inner)
    rw = 1.0 / np.sqrt(w)
    # -h'' + mu h = lam w h, symmetrised with W^(-1/2)
    diag = (2.0 / step**2 + p.mu) * rw * rw
    off = -(1.0 / step**2) * rw[:-1] * rw[1:]
    try:
        vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(k - 1, k - 1))
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"tridiagonal eigensolver failed: {exc}") from exc
    vec = np.concatenate(([0.0], vecs[:, 0] * rw, [0.0]))
    return float(vals[0]), x, vec


def oracle_fd(p: AngularProblem, k: int = 1) -> EigenPair:
    """Finite-difference eigenvalue with one Richardson step.

    Second differences on ``grid_size`` and ``2 * grid_size`` intervals,
    ``A h = lam W h`` with ``W = diag(w(theta_i))``; the two eigenvalues are
    combined as ``(4 lam_fine - lam_coarse) / 3``.
    """
    if p.grid_size < 200:
        raise ValueError("oracle needs grid_size >= 200")
    lam_c, _, _ = _fd_eigen(p, k, p.grid_size)
    lam_f, x, vec = _fd_eigen(p, k, 2 * p.grid_size)
    lam = (4.0 * lam_f - lam_c) / 3.0
    # orient like the shooting solution: positive next to theta0
    first = vec[np.flatnonzero(vec)[0]]
    vec = vec * np.sign(first)
    vec = vec / math.sqrt(simpson(vec**2, x=x))
    return EigenPair(lam, k, GridFunction(x, vec), "unitL2", p)
