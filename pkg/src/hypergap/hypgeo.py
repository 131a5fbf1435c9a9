"""Hyperbolic geometry of the Poincare half-plane.

Points, the distance function, the domains

    Omega(c, theta0, theta1) = {(r, theta) : 1 < r < exp(pi/c), theta0 < theta < theta1}

their corners and their diameter. Corner distances are evaluated from the
closed form ``Psi`` in a cancellation-free way so that both very thin
angular sectors (argument close to 1) and very long sectors (``pi/c`` large
enough to overflow ``exp``) are handled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "DomainError",
    "HPoint",
    "DomainParams",
    "DiameterReport",
    "acosh1p",
    "distance",
    "psi",
    "psi_distance",
    "angular_invariance",
    "diameter",
    "diameter_bounds",
    "qr_distance",
]

# above this, exp(pi/c) style quantities are handled in log space
_LOG_SPACE_T = 700.0
_LN2 = math.log(2.0)


class DomainError(ValueError):
    """Raised for points or parameters outside the model's domain."""


@dataclass(frozen=True)
class HPoint:
    """A point of the upper half-plane, stored in cartesian coordinates."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0.0) or not math.isfinite(self.x):
            raise DomainError(f"half-plane point needs y > 0, got ({self.x}, {self.y})")

    @classmethod
    def from_polar(cls, r: float, theta: float) -> "HPoint":
        if not (r > 0.0 and 0.0 < theta < math.pi):
            raise DomainError(f"polar point needs r > 0, 0 < theta < pi, got ({r}, {theta})")
        return cls(r * math.cos(theta), r * math.sin(theta))

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def theta(self) -> float:
        return math.atan2(self.y, self.x)


@dataclass(frozen=True)
class DomainParams:
    """The triple ``(c, theta0, theta1)``.

    Validation requires ``0 < theta0 < pi/2 < theta1 < pi``, the range in
    which the sectors are convex. ``strict=False`` only checks
    ``0 < theta0 < theta1 < pi`` and is meant for exploratory sweeps.
    """

    c: float
    theta0: float
    theta1: float
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        c, t0, t1 = self.c, self.theta0, self.theta1
        if not all(math.isfinite(v) for v in (c, t0, t1)):
            raise DomainError("domain parameters must be finite")
        if not c > 0.0:
            raise DomainError(f"c must be positive, got {c}")
        if self.strict:
            if not (0.0 < t0 < math.pi / 2 < t1 < math.pi):
                raise DomainError(
                    f"need 0 < theta0 < pi/2 < theta1 < pi, got theta0={t0}, theta1={t1}"
                )
        elif not (0.0 < t0 < t1 < math.pi):
            raise DomainError(f"need 0 < theta0 < theta1 < pi, got theta0={t0}, theta1={t1}")

    @classmethod
    def symmetric(cls, c: float, theta_star: float, strict: bool = True) -> "DomainParams":
        return cls(c, theta_star, math.pi - theta_star, strict=strict)

    @property
    def theta_star(self) -> float:
        return min(self.theta0, math.pi - self.theta1)

    @property
    def width(self) -> float:
        """Angular width ``L = theta1 - theta0``."""
        return self.theta1 - self.theta0

    @property
    def log_radius(self) -> float:
        """``pi/c``, the hyperbolic length of the vertical sides."""
        return math.pi / self.c

    @property
    def outer_radius(self) -> float:
        return math.exp(self.log_radius)  # OverflowError for pi/c > ~709

    @property
    def corners(self) -> dict[str, HPoint]:
        big = self.outer_radius
        return {
            "P": HPoint.from_polar(1.0, self.theta0),
            "Q": HPoint.from_polar(big, self.theta0),
            "R": HPoint.from_polar(big, self.theta1),
            "S": HPoint.from_polar(1.0, self.theta1),
        }


@dataclass(frozen=True)
class DiameterReport:
    diameter: float
    achieving_pair: str
    lower_bound: float
    upper_bound: float
    eta: float
    linear_lower: float
    linear_upper: float
    corner_distances: dict[str, float]

    def bounds_hold(self, rtol: float = 1e-12) -> bool:
        slack = rtol * self.diameter
        return (
            self.lower_bound - slack <= self.diameter <= self.upper_bound + slack
            and self.linear_lower - slack <= self.diameter <= self.linear_upper + slack
        )


def acosh1p(z: float) -> float:
    """``arcosh(1 + z)`` without cancellation for small ``z >= 0``."""
    if z < 0.0:
        if z > -1e-15:
            return 0.0
        raise DomainError(f"arcosh argument below 1 (1 + {z})")
    if z > 1e150:
        return math.log(z) + _LN2 + math.log1p(1.0 / z)
    return math.log1p(z + math.sqrt(z * (z + 2.0)))


def _acosh_from_log(ell: float) -> float:
    """``arcosh(x)`` given ``ell = log(x)`` for large ``x``."""
    return ell + math.log1p(math.sqrt(-math.expm1(-2.0 * ell)))


def distance(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance between two half-plane points."""
    if not (p.y > 0.0 and q.y > 0.0):
        raise DomainError("distance needs points with positive ordinate")
    dx = q.x - p.x
    dy = q.y - p.y
    z = (dx * dx + dy * dy) / (2.0 * p.y * q.y)
    return acosh1p(z)


def _check_angle(a: float) -> None:
    if not (0.0 < a < math.pi):
        raise DomainError(f"angle must lie in (0, pi), got {a}")


def psi(alpha: float, beta: float, c: float) -> float:
    """cosh of the distance from the unit-radius point at angle ``alpha`` to
    the radius-``exp(pi/c)`` point at angle ``beta``.

    Returns ``inf`` when the value overflows a double; use
    :func:`psi_distance` for the distance itself.
    """
    _check_angle(alpha)
    _check_angle(beta)
    if not c > 0.0:
        raise DomainError(f"c must be positive, got {c}")
    try:
        ch = math.cosh(math.pi / c)
    except OverflowError:
        return math.inf
    return (ch - math.cos(alpha) * math.cos(beta)) / (math.sin(alpha) * math.sin(beta))


def psi_distance(alpha: float, beta: float, c: float) -> float:
    """``arcosh(psi(alpha, beta, c))`` evaluated stably for every ``c > 0``."""
    _check_angle(alpha)
    _check_angle(beta)
    T = math.pi / c
    ss = math.sin(alpha) * math.sin(beta)
    if T < _LOG_SPACE_T:
        # psi - 1 = 2 (sinh^2(T/2) + sin^2((alpha - beta)/2)) / (sin alpha sin beta)
        z = 2.0 * (math.sinh(0.5 * T) ** 2 + math.sin(0.5 * (alpha - beta)) ** 2) / ss
        return acosh1p(z)
    cc = math.cos(alpha) * math.cos(beta)
    # log(cosh T - cc) = T - ln 2 + log1p(exp(-2T) - 2 cc exp(-T))
    ell = T - _LN2 + math.log1p(math.exp(-2.0 * T) - 2.0 * cc * math.exp(-T)) - math.log(ss)
    return _acosh_from_log(ell)


def angular_invariance(r: float, alpha: float, beta: float) -> float:
    """Distance between ``(r cos alpha, r sin alpha)`` and ``(r cos beta, r sin beta)``."""
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    return distance(HPoint.from_polar(r, alpha), HPoint.from_polar(r, beta))


def _acosh_cosh_plus(T: float, k: float) -> float:
    """``arcosh(cosh T + k)`` for ``k >= 0``."""
    if T < _LOG_SPACE_T:
        return acosh1p(2.0 * math.sinh(0.5 * T) ** 2 + k)
    ell = T - _LN2 + math.log1p(math.exp(-2.0 * T) + 2.0 * k * math.exp(-T))
    return _acosh_from_log(ell)


def _inv_sinh(T: float) -> float:
    if T < _LOG_SPACE_T:
        return 1.0 / math.sinh(T)
    return 2.0 * math.exp(-T)


def diameter_bounds(d: DomainParams) -> tuple[float, float, float, float, float]:
    """Closed-form bounds on the diameter.

    Returns ``(lower, upper, eta, linear_lower, linear_upper)`` where
    ``lower = arcosh(csc(th*) cosh(pi/c))``,
    ``upper = arcosh(csc^2(th*) cosh(pi/c) + cot^2(th*))``,
    ``linear_lower = ln csc(th*) + pi/c`` and
    ``linear_upper = 2 ln csc(th*) + pi/c + eta``.
    """
    ts = d.theta_star
    T = d.log_radius
    lower = psi_distance(ts, math.pi / 2, d.c)
    upper = psi_distance(ts, math.pi - ts, d.c)
    cos2 = math.cos(ts) ** 2
    sin2 = math.sin(ts) ** 2
    # 1 / (a + sqrt(a^2 - 1)) = exp(-arcosh a), a = cosh T + cos^2
    inv_a_term = math.exp(-_acosh_cosh_plus(T, cos2))
    eta = cos2 * _inv_sinh(T) + math.sqrt(max(0.0, 1.0 - sin2 * sin2)) * inv_a_term
    log_csc = -math.log(math.sin(ts))
    return lower, upper, eta, log_csc + T, 2.0 * log_csc + T + eta


def diameter(d: DomainParams) -> DiameterReport:
    """Diameter as the largest of the corner distances PQ, PR and RS.

    SQ equals PR and SP equals QR (which is always shorter than PR), so those
    pairs are not evaluated.
    """
    dists = {
        # PR first so that it wins floating-point ties (it is the diameter of symmetric sectors)
        "PR": psi_distance(d.theta0, d.theta1, d.c),
        "PQ": psi_distance(d.theta0, d.theta0, d.c),
        "RS": psi_distance(d.theta1, d.theta1, d.c),
    }
    pair = max(dists, key=dists.__getitem__)
    lower, upper, eta, lin_lo, lin_hi = diameter_bounds(d)
    return DiameterReport(
        diameter=dists[pair],
        achieving_pair=pair,
        lower_bound=lower,
        upper_bound=upper,
        eta=eta,
        linear_lower=lin_lo,
        linear_upper=lin_hi,
        corner_distances=dists,
    )


def qr_distance(d: DomainParams) -> float:
    """Distance between the two outer corners (equal to that of the inner ones)."""
    # cosh(dist) - 1 = (1 - cos(theta1 - theta0)) / (sin theta0 sin theta1)
    z = 2.0 * math.sin(0.5 * d.width) ** 2 / (math.sin(d.theta0) * math.sin(d.theta1))
    return acosh1p(z)
