"""Lower bounds on ``||T_n(g)||`` and the resulting finite-section gap bounds.

The chain is: decay certificate ``(D, C, rho)`` -> smoothness constant L
-> lower bound ``M - C1 L/(M n^2) - C2 C^2/(M (1+rho)(1-rho)^5 n^3)`` with
``M = ||G||_inf``.  Certificates built from a radius-gamma Cauchy estimate
turn this into a bound that depends on the two norms ``||G||_inf`` and
``||G^gamma||_inf`` plus ``|g_0|``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import BoundTooWeakError, DomainError, InvalidArgumentError
from .systems import (
    DecayCertificate,
    LtiSystem,
    decay_certificate,
    frequency_response,
    hinf_norm,
    scaled_hinf_norm,
    stability_radius,
)

__all__ = [
    "C1",
    "C2",
    "SmoothnessCertificate",
    "BoundBreakdown",
    "GapBoundReport",
    "smoothness_from_decay",
    "smoothness_exact_fir",
    "smoothness_violation",
    "bg_lower_bound",
    "theorem1_gap_bound",
    "optimize_gamma",
    "required_length",
]

C1 = 3.0 * math.sqrt(2.0) * math.pi * (2.0 + 3.0 * math.pi ** 4)
C2 = 9.0 * math.sqrt(2.0) * math.pi ** 2

GAMMA_GRID = 200
GAMMA_MARGIN = 1e-6
GAMMA_RTOL = 1e-4
N_CAP = 10 ** 9


@dataclass(frozen=True)
class SmoothnessCertificate:
    l_const: float
    theta0: float
    method: str  # "lemma2-bound" or "exact-fir"


@dataclass(frozen=True)
class BoundBreakdown:
    m_norm: float
    term_n2: float
    term_n3: float
    lower_bound: float
    c1: float
    c2: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class GapBoundReport:
    gamma: float
    g_gamma_norm: float
    gap_bound: float
    n: int
    breakdown: BoundBreakdown

    def to_dict(self):
        return asdict(self)


@functools.lru_cache(maxsize=1024)
def _hinf(sys):
    return hinf_norm(sys)


# --------------------------------------------------------------------------
# smoothness

def smoothness_from_decay(cert: DecayCertificate, sys: LtiSystem | None = None,
                          theta0: float = 0.0) -> SmoothnessCertificate:
    """``L = (D C (1 - rho^2) + C^2 rho) / (1 - rho)^4``.

    When ``sys`` is given the peak frequency is taken from its H-infinity
    computation, otherwise ``theta0`` is used as is.
    """
    d, c, r = cert.d_bound, cert.c_const, cert.rho
    if not 0.0 <= r < 1.0:
        raise DomainError(f"decay rate must lie in [0, 1), got {r}")
    l_const = (d * c * (1.0 - r * r) + c * c * r) / (1.0 - r) ** 4
    if sys is not None:
        theta0 = _hinf(sys).theta0
    return SmoothnessCertificate(l_const, float(theta0), "lemma2-bound")


def smoothness_exact_fir(coeffs, theta0: float | None = None) -> SmoothnessCertificate:
    """``L = sum_{k>=1} k^2 |b_k|`` from the exact autocorrelation ``b`` of an FIR."""
    g = np.ravel(np.asarray(coeffs, dtype=float))
    if g.size == 0:
        raise InvalidArgumentError("FIR needs at least one coefficient")
    b = np.correlate(g, g, mode="full")[g.size:]
    k = np.arange(1, g.size)
    l_const = float(np.sum(k * k * np.abs(b)))
    if theta0 is None:
        from .systems import Fir

        theta0 = _hinf(Fir(tuple(g))).theta0
    return SmoothnessCertificate(l_const, float(theta0), "exact-fir")


def smoothness_violation(sys: LtiSystem, cert: SmoothnessCertificate,
                         n_grid: int = 4096) -> float:
    """Largest ``||G||^2 - |G|^2 - L (theta - theta0)^2`` on a theta grid.

    The distance to the peak is taken modulo 2 pi.  A value <= 0 (up to
    rounding) means the certificate holds on the grid.
    """
    theta = np.linspace(-np.pi, np.pi, n_grid)
    peak = _hinf(sys).norm
    lhs = peak ** 2 - np.abs(frequency_response(sys, theta)) ** 2
    dist = np.abs((theta - cert.theta0 + np.pi) % (2 * np.pi) - np.pi)
    return float(np.max(lhs - cert.l_const * dist ** 2))


# --------------------------------------------------------------------------
# lower bound and gap bound

def bg_lower_bound(m_norm: float, L: float, C: float, rho: float, n: int,
                   c1: float = C1, c2: float = C2) -> BoundBreakdown:
    """Lower bound on ``||T_n(a)||`` from the symbol's sup norm, smoothness
    constant L and decay certificate ``|a_k| <= C rho^(k-1)``; needs n >= 3."""
    if n < 3:
        raise InvalidArgumentError(f"the bound needs n >= 3, got {n}")
    if not m_norm > 0:
        raise InvalidArgumentError("m_norm must be positive")
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must lie in [0, 1), got {rho}")
    term_n2 = c1 * L / (m_norm * n ** 2)
    term_n3 = c2 * C * C / (m_norm * (1.0 + rho) * (1.0 - rho) ** 5 * n ** 3)
    return BoundBreakdown(m_norm, term_n2, term_n3, m_norm - term_n2 - term_n3, c1, c2)


def theorem1_gap_bound(sys: LtiSystem, gamma: float, n: int,
                       d_override: float | None = None,
                       c1: float = C1, c2: float = C2) -> GapBoundReport:
    """Upper bound on ``||G||_inf - ||T_n(g)||`` for a fixed ``gamma`` in (rho, 1)."""
    cert = decay_certificate(sys, gamma, d_override=d_override)
    smooth = smoothness_from_decay(cert)
    breakdown = bg_lower_bound(_hinf(sys).norm, smooth.l_const, cert.c_const,
                               cert.rho, n, c1, c2)
    gap = breakdown.m_norm - breakdown.lower_bound
    return GapBoundReport(float(gamma), cert.c_const, gap, int(n), breakdown)


def _gamma_grid(rho, size=GAMMA_GRID):
    # evenly spaced in log((g - rho) / (1 - g)): dense near both ends
    lo, hi = rho + GAMMA_MARGIN, 1.0 - GAMMA_MARGIN
    u = np.linspace(math.log((lo - rho) / (1 - lo)), math.log((hi - rho) / (1 - hi)), size)
    e = np.exp(u)
    return (rho + e) / (1.0 + e)


def optimize_gamma(sys: LtiSystem, n: int, d_override: float | None = None,
                   c1: float = C1, c2: float = C2):
    """Minimize the gap bound over gamma; returns ``(gamma_star, report)``.

    A 200-point grid is followed by bounded refinement around the best grid
    point.  Ties go to the smaller gamma.
    """
    if n < 3:
        raise InvalidArgumentError(f"the bound needs n >= 3, got {n}")
    rho = stability_radius(sys)
    grid = _gamma_grid(rho)

    def objective(g):
        return theorem1_gap_bound(sys, g, n, d_override, c1, c2).gap_bound

    values = np.array([objective(g) for g in grid])
    i = int(np.argmin(values))  # first minimum, i.e. smaller gamma on ties
    best_g, best_v = float(grid[i]), float(values[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    if hi > lo:
        res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                              options={"xatol": GAMMA_RTOL * best_g})
        if res.fun < best_v:
            best_g, best_v = float(res.x), float(res.fun)
    return best_g, theorem1_gap_bound(sys, best_g, n, d_override, c1, c2)


def required_length(sys: LtiSystem, eps: float, d_override: float | None = None,
                    n_cap: int = N_CAP) -> int:
    """Smallest n >= 3 whose optimized gap bound is at most ``eps``."""
    if not eps > 0:
        raise InvalidArgumentError("eps must be positive")
    if eps >= _hinf(sys).norm:
        # ||T_n|| >= 0 already gives gap <= ||G||_inf
        return 3

    def ok(n):
        return optimize_gamma(sys, n, d_override)[1].gap_bound <= eps

    hi = 3
    while not ok(hi):
        if hi >= n_cap:
            report = optimize_gamma(sys, n_cap, d_override)[1]
            raise BoundTooWeakError(
                f"gap bound at n = {n_cap} is {report.gap_bound:.6g} > eps = {eps:g}",
                report)
        hi = min(2 * hi, n_cap)
    lo = max(3, hi // 2)
    if lo == hi or ok(lo):
        return lo
    while hi - lo > 1:  # invariant: not ok(lo), ok(hi)
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
