"""Stable SISO discrete-time LTI systems.

Three structured forms are supported, all real valued and causal,

    Fir          G(z) = g_0 + g_1 z^-1 + ... + g_d z^-d
    SinglePole   G(z) = c / (z - rho) + d0
    StateSpace   G(z) = d0 + c^T (zI - A)^-1 b

with the impulse response convention G(z) = sum_k g_k z^-k.  Frequency
responses are always evaluated from the structured form, never from a
truncated series.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, InvalidArgumentError, UnstableSystemError

__all__ = [
    "Fir",
    "SinglePole",
    "StateSpace",
    "LtiSystem",
    "ImpulseSequence",
    "DecayCertificate",
    "HinfResult",
    "impulse_response",
    "frequency_response",
    "hinf_norm",
    "scaled_hinf_norm",
    "stability_radius",
    "decay_certificate",
    "curvature_constant",
    "truncation_length",
    "from_descriptor",
    "to_descriptor",
]

MIN_GRID = 4096
MAX_GRID = 2 ** 16
REFINE_XTOL = 1e-10
TAIL_RTOL = 1e-12
TIE_RTOL = 1e-12
MAX_REFINED_PEAKS = 64


@dataclass(frozen=True)
class Fir:
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(v) for v in np.ravel(np.asarray(self.coeffs, dtype=float)))
        if not coeffs:
            raise InvalidArgumentError("FIR system needs at least one coefficient")
        if not all(math.isfinite(v) for v in coeffs):
            raise InvalidArgumentError("FIR coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class SinglePole:
    """``G(z) = c / (z - rho) + d0``; impulse response ``d0, c, c*rho, c*rho**2, ...``."""

    rho: float
    c: float = 1.0
    d0: float = 0.0

    def __post_init__(self):
        for name in ("rho", "c", "d0"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not 0.0 < self.rho < 1.0:
            if self.rho >= 1.0:
                raise UnstableSystemError(f"pole at {self.rho} is not inside the unit disk")
            raise InvalidArgumentError(f"rho must lie in (0, 1), got {self.rho}")
        if not self.c > 0.0:
            raise InvalidArgumentError(f"c must be positive, got {self.c}")
        if not self.d0 >= 0.0:
            raise InvalidArgumentError(f"d0 must be nonnegative, got {self.d0}")


@dataclass(frozen=True)
class StateSpace:
    """Realization ``(A, b, c^T, d0)``; stability is checked on construction.

    Matrices are stored as nested tuples so that systems are hashable; use
    the ``*_array`` properties for numerical work.
    """

    A: tuple
    b: tuple
    c: tuple
    d0: float = 0.0

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.ravel(np.asarray(self.b, dtype=float))
        c = np.ravel(np.asarray(self.c, dtype=float))
        n = A.shape[0]
        if A.shape != (n, n) or b.shape != (n,) or c.shape != (n,):
            raise InvalidArgumentError(
                f"inconsistent shapes A{A.shape}, b{b.shape}, c{c.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))
                and np.all(np.isfinite(c)) and math.isfinite(self.d0)):
            raise InvalidArgumentError("state-space data must be finite")
        radius = float(np.max(np.abs(np.linalg.eigvals(A))))
        if radius >= 1.0:
            raise UnstableSystemError(
                f"spectral radius of A is {radius:.6g} >= 1; system is not stable")
        object.__setattr__(self, "A", tuple(tuple(row) for row in A.tolist()))
        object.__setattr__(self, "b", tuple(b.tolist()))
        object.__setattr__(self, "c", tuple(c.tolist()))
        object.__setattr__(self, "d0", float(self.d0))
        object.__setattr__(self, "_radius", radius)

    @property
    def A_array(self):
        return np.array(self.A, dtype=float)

    @property
    def b_array(self):
        return np.array(self.b, dtype=float)

    @property
    def c_array(self):
        return np.array(self.c, dtype=float)

    @property
    def order(self):
        return len(self.b)


LtiSystem = Union[Fir, SinglePole, StateSpace]


@dataclass(frozen=True)
class ImpulseSequence:
    coeffs: np.ndarray
    tail_bound: float


@dataclass(frozen=True)
class DecayCertificate:
    """Witness ``|g_0| <= d_bound`` and ``|g_k| <= c_const * rho**(k-1)`` for k >= 1."""

    d_bound: float
    c_const: float
    rho: float

    def check(self, coeffs, rtol=1e-12):
        """True when the prefix ``coeffs`` satisfies the certificate."""
        g = np.abs(np.asarray(coeffs, dtype=float))
        if g.size == 0:
            return True
        ok = g[0] <= self.d_bound * (1 + rtol)
        k = np.arange(1, g.size)
        envelope = self.c_const * self.rho ** (k - 1.0)
        return bool(ok and np.all(g[1:] <= envelope * (1 + rtol) + 1e-300))


@dataclass(frozen=True)
class HinfResult:
    norm: float
    theta0: float
    grid_size: int
    error_bound: float


# --------------------------------------------------------------------------
# basic structure

def stability_radius(sys: LtiSystem) -> float:
    """Largest pole modulus; zero for FIR systems."""
    if isinstance(sys, Fir):
        return 0.0
    if isinstance(sys, SinglePole):
        radius = sys.rho
    elif isinstance(sys, StateSpace):
        radius = sys._radius
    else:
        raise InvalidArgumentError(f"unsupported system type {type(sys).__name__}")
    if radius >= 1.0:
        raise UnstableSystemError(f"stability radius {radius} >= 1")
    return radius


def impulse_response(sys: LtiSystem, n_terms: int) -> ImpulseSequence:
    """First ``n_terms`` impulse-response coefficients and a bound on the rest."""
    if int(n_terms) != n_terms or n_terms < 1:
        raise InvalidArgumentError(f"n_terms must be a positive integer, got {n_terms}")
    n_terms = int(n_terms)
    g = np.zeros(n_terms)
    if isinstance(sys, Fir):
        coeffs = np.asarray(sys.coeffs)
        m = min(n_terms, coeffs.size)
        g[:m] = coeffs[:m]
        tail = float(np.sum(np.abs(coeffs[n_terms:])))
        return ImpulseSequence(g, tail)
    if isinstance(sys, SinglePole):
        g[0] = sys.d0
        k = np.arange(1, n_terms)
        g[1:] = sys.c * sys.rho ** (k - 1.0)
        tail = sys.c * sys.rho ** (n_terms - 1) / (1.0 - sys.rho)
        return ImpulseSequence(g, float(tail))
    if isinstance(sys, StateSpace):
        A, b, c = sys.A_array, sys.b_array, sys.c_array
        g[0] = sys.d0
        x = b.copy()
        for k in range(1, n_terms):
            g[k] = c @ x
            x = A @ x
        cert = decay_certificate(sys, _default_gamma(sys))
        tail = cert.c_const * cert.rho ** (n_terms - 1) / (1.0 - cert.rho)
        return ImpulseSequence(g, float(tail))
    raise InvalidArgumentError(f"unsupported system type {type(sys).__name__}")


def frequency_response(sys: LtiSystem, theta, radius: float = 1.0):
    """Evaluate ``G(radius * exp(1j*theta))``; vectorized over ``theta``."""
    if not radius > stability_radius(sys):
        raise DomainError(
            f"radius {radius} does not exceed the stability radius {stability_radius(sys)}")
    theta_arr = np.asarray(theta, dtype=float)
    z = radius * np.exp(1j * theta_arr)
    if isinstance(sys, Fir):
        out = np.polynomial.polynomial.polyval(1.0 / z, np.asarray(sys.coeffs))
    elif isinstance(sys, SinglePole):
        out = sys.c / (z - sys.rho) + sys.d0
    else:
        out = _state_space_response(sys, z)
    if np.ndim(out) == 0:
        return complex(out)
    return out


@functools.lru_cache(maxsize=256)
def _modal_form(sys):
    """Residues and poles ``(r_i, lambda_i)`` when A is well diagonalizable."""
    lam, V = np.linalg.eig(sys.A_array)
    if np.linalg.cond(V) > 1e6:
        return None
    left = np.linalg.solve(V, sys.b_array.astype(complex))
    return (sys.c_array @ V) * left, lam


def _state_space_response(sys, z, chunk=8192):
    zz = np.atleast_1d(z).ravel()
    modal = _modal_form(sys)
    if modal is not None:
        res, lam = modal
        out = sys.d0 + (res[None, :] / (zz[:, None] - lam[None, :])).sum(axis=1)
    else:
        A, b, c = sys.A_array, sys.b_array, sys.c_array
        eye = np.eye(A.shape[0])
        out = np.empty(zz.size, dtype=complex)
        for s in range(0, zz.size, chunk):
            block = zz[s:s + chunk]
            lhs = block[:, None, None] * eye - A
            rhs = np.broadcast_to(b.astype(complex), (block.size, b.size))[..., None]
            out[s:s + chunk] = np.linalg.solve(lhs, rhs)[..., 0] @ c + sys.d0
    return out.reshape(np.shape(z))


def _pole_angles(sys):
    if isinstance(sys, SinglePole):
        return np.array([0.0]), np.array([sys.rho])
    if isinstance(sys, StateSpace):
        lam = np.linalg.eigvals(sys.A_array)
        return np.angle(lam), np.abs(lam)
    return np.empty(0), np.empty(0)


# --------------------------------------------------------------------------
# peak search on a circle

def _grid(m):
    return -np.pi + 2.0 * np.pi * np.arange(m) / m


def _grid_size(sys):
    n = len(sys.coeffs) if isinstance(sys, Fir) else truncation_length(sys)
    m = min(max(MIN_GRID, 16 * n), MAX_GRID)
    return int(4 * math.ceil(m / 4))  # keeps 0, +-pi/2 and -pi on the grid


def _refine(sys, radius, lo, hi):
    def neg_sq(t):
        return -abs(frequency_response(sys, t, radius)) ** 2

    res = minimize_scalar(neg_sq, bounds=(lo, hi), method="bounded",
                          options={"xatol": REFINE_XTOL})
    return float(res.x), float(-res.fun)


def _wrap(theta):
    theta = (theta + np.pi) % (2.0 * np.pi) - np.pi
    return np.pi if theta == -np.pi else float(theta)


def _tie_key(theta):
    return (theta < 0.0, abs(theta))


def _circle_peak(sys, radius, m, slack=0.0):
    """Peak of ``|G|^2`` on the circle: grid search, then bounded refinement.

    Every grid local maximum whose squared value is within ``slack`` of the
    grid maximum is refined.  Returns ``(peak_sq, theta, grid, sq)``.
    """
    theta = _grid(m)
    sq = np.abs(frequency_response(sys, theta, radius)) ** 2
    left, right = np.roll(sq, 1), np.roll(sq, -1)
    local = np.flatnonzero((sq >= left) & (sq >= right))
    top = sq.max()
    local = local[sq[local] >= top - slack - TIE_RTOL * top]
    local = local[np.argsort(-sq[local], kind="stable")][:MAX_REFINED_PEAKS]
    h = 2.0 * np.pi / m
    found = []
    for i in local:
        t, v = _refine(sys, radius, theta[i] - h, theta[i] + h)
        if v <= sq[i] * (1.0 + TIE_RTOL):
            t, v = float(theta[i]), float(sq[i])
        found.append((v, _wrap(t)))
    # poles close to the circle give peaks narrower than the grid spacing
    angles, moduli = _pole_angles(sys)
    for t0, mod in zip(angles, moduli):
        width = min(h, 4.0 * (radius - mod) / radius)
        v0 = abs(frequency_response(sys, t0, radius)) ** 2
        t, v = _refine(sys, radius, t0 - width, t0 + width)
        if v <= v0 * (1.0 + TIE_RTOL):
            t, v = float(t0), v0
        found.append((v, _wrap(t)))
    best = max(v for v, _ in found)
    ties = [t for v, t in found if v >= best * (1.0 - TIE_RTOL)]
    return best, min(ties, key=_tie_key), theta, sq


def _interval_upper(f0, f1, width, curvature):
    """Upper bound on max of f over an interval given |f''| <= curvature."""
    half = 0.5 * curvature * width * width
    if curvature == 0.0:
        return np.maximum(f0, f1)
    t = np.clip(0.5 + (f1 - f0) / (2.0 * half), 0.0, 1.0)
    return f0 * (1.0 - t) + f1 * t + half * t * (1.0 - t)


def _certify(sys, theta, sq, best, l_const, tol, max_rounds=60):
    """Branch and bound over grid cells; returns ``(best, theta_best, error_bound)``.

    ``l_const`` bounds half the second derivative of ``|G|^2``, so any cell
    of width w whose endpoint values are known has an explicit upper bound.
    Cells that could still exceed the incumbent by more than the tolerance
    are bisected.
    """
    curvature = 2.0 * l_const
    lo = theta
    f_lo = sq
    f_hi = np.roll(sq, -1)
    width = np.full(theta.size, 2.0 * np.pi / theta.size)
    best_theta = None
    target = lambda b: (math.sqrt(b) + tol) ** 2  # noqa: E731
    for _ in range(max_rounds):
        upper = _interval_upper(f_lo, f_hi, width, curvature)
        active = upper > target(best)
        if not np.any(active):
            break
        lo, f_lo, f_hi, width = lo[active], f_lo[active], f_hi[active], width[active]
        half = width / 2.0
        mid = lo + half
        f_mid = np.abs(frequency_response(sys, mid)) ** 2
        j = int(np.argmax(f_mid))
        if f_mid[j] > best:
            best, best_theta = float(f_mid[j]), _wrap(float(mid[j]))
        lo = np.concatenate([lo, mid])
        f_lo, f_hi = np.concatenate([f_lo, f_mid]), np.concatenate([f_mid, f_hi])
        width = np.concatenate([half, half])
    upper = _interval_upper(f_lo, f_hi, width, curvature)
    ceiling = max(best, float(upper.max()) if upper.size else best)
    return best, best_theta, math.sqrt(ceiling) - math.sqrt(best)


def hinf_norm(sys: LtiSystem, tol: float = 1e-9) -> HinfResult:
    """H-infinity norm by dense frequency grid plus local refinement.

    The error bound is certified with the curvature constant of
    ``|G(e^{j theta})|^2`` (see :func:`curvature_constant`).
    """
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    m = _grid_size(sys)
    l_const = curvature_constant(sys)
    slack = l_const * (np.pi / m) ** 2
    best, theta0, grid, sq = _circle_peak(sys, 1.0, m, slack)
    best, moved, err = _certify(sys, grid, sq, best, l_const, tol)
    if moved is not None:
        # bisection found a higher point than refinement; polish around it
        t, v = _refine(sys, 1.0, moved - 2 * np.pi / m, moved + 2 * np.pi / m)
        if v > best:
            best, moved = v, _wrap(t)
        theta0 = moved
        if theta0 < 0 and abs(frequency_response(sys, -theta0)) ** 2 >= best * (1 - TIE_RTOL):
            theta0 = -theta0
    return HinfResult(math.sqrt(best), float(theta0), int(m), float(err))


def _scaled_grid_size(sys, radius):
    if isinstance(sys, Fir):
        n = len(sys.coeffs)
    else:
        # terms until (rho/radius)^k drops below the tail tolerance
        ratio = stability_radius(sys) / radius
        n = 1 if ratio == 0.0 else int(math.ceil(math.log(TAIL_RTOL) / math.log(ratio)))
    m = min(max(MIN_GRID, 16 * n), MAX_GRID)
    return int(4 * math.ceil(m / 4))


@functools.lru_cache(maxsize=65536)
def _radius_peak(sys, radius):
    if isinstance(sys, SinglePole):
        # with c > 0 and d0 >= 0 the modulus peaks at z = radius
        return sys.d0 + sys.c / (radius - sys.rho)
    peak_sq, _, _, _ = _circle_peak(sys, radius, _scaled_grid_size(sys, radius))
    return math.sqrt(peak_sq)


def scaled_hinf_norm(sys: LtiSystem, gamma: float) -> float:
    """``||G^gamma||_inf = gamma * sup_theta |G(gamma e^{j theta})|``."""
    gamma = float(gamma)
    rho = stability_radius(sys)
    if not rho < gamma < 1.0:
        raise DomainError(f"gamma must lie in ({rho}, 1), got {gamma}")
    return gamma * _radius_peak(sys, gamma)


def _leading_coeff(sys):
    return sys.coeffs[0] if isinstance(sys, Fir) else sys.d0


def _default_gamma(sys):
    return 0.5 * (1.0 + stability_radius(sys))


def decay_certificate(sys: LtiSystem, gamma: float | None = None, *,
                      exact: bool = False, d_override: float | None = None
                      ) -> DecayCertificate:
    """Decay certificate ``(D, C, rho)`` with ``|g_k| <= C rho**(k-1)``.

    By default the certificate comes from Cauchy's estimate on the circle of
    radius ``gamma``: ``C = gamma * sup|G(gamma z)|`` and ``rho = gamma``.
    ``exact=True`` returns the closed-form certificate of a single-pole
    system instead.
    """
    d_bound = abs(_leading_coeff(sys)) if d_override is None else float(d_override)
    if exact:
        if not isinstance(sys, SinglePole):
            raise InvalidArgumentError("an exact certificate is only available for SinglePole")
        return DecayCertificate(d_bound, sys.c, sys.rho)
    if gamma is None:
        gamma = _default_gamma(sys)
    return DecayCertificate(d_bound, scaled_hinf_norm(sys, gamma), float(gamma))


def curvature_constant(sys: LtiSystem) -> float:
    """Constant L with ``|d^2/dtheta^2 |G|^2| <= 2 L`` on the unit circle.

    FIR systems use the exact autocorrelation sum; other forms go through a
    decay certificate (exact for single poles).
    """
    if isinstance(sys, Fir):
        g = np.asarray(sys.coeffs)
        b = np.correlate(g, g, mode="full")[g.size:]
        k = np.arange(1, g.size)
        return float(np.sum(k * k * np.abs(b)))
    cert = decay_certificate(sys, exact=isinstance(sys, SinglePole))
    d, c, r = cert.d_bound, cert.c_const, cert.rho
    return (d * c * (1 - r * r) + c * c * r) / (1 - r) ** 4


def truncation_length(sys: LtiSystem) -> int:
    """Smallest N whose certified tail is below ``1e-12 * ||G||_inf``."""
    if isinstance(sys, Fir):
        return len(sys.coeffs)
    cert = decay_certificate(sys, exact=isinstance(sys, SinglePole))
    peak = math.sqrt(_circle_peak(sys, 1.0, MIN_GRID)[0])
    c, r = cert.c_const, cert.rho
    if c == 0.0 or peak == 0.0:
        return 1
    # c r^(N-1) / (1-r) < tol * peak
    target = TAIL_RTOL * peak * (1.0 - r) / c
    if target >= 1.0 or r == 0.0:
        return 1
    n = int(math.floor(math.log(target) / math.log(r))) + 2
    while n > 1 and c * r ** (n - 2) / (1 - r) < TAIL_RTOL * peak:
        n -= 1
    return max(n, 1)


# --------------------------------------------------------------------------
# JSON descriptors

def from_descriptor(desc: dict) -> LtiSystem:
    """Build a system from its JSON descriptor (a dict)."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise InvalidArgumentError("system descriptor must be an object with a 'type' key")
    kind = desc["type"]
    try:
        if kind == "fir":
            return Fir(tuple(desc["coeffs"]))
        if kind == "single_pole":
            return SinglePole(desc["rho"], desc.get("c", 1.0), desc.get("d0", 0.0))
        if kind == "state_space":
            return StateSpace(desc["A"], desc["b"], desc["c"], desc.get("d0", 0.0))
    except KeyError as exc:
        raise InvalidArgumentError(f"descriptor of type {kind!r} is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidArgumentError, UnstableSystemError)):
            raise
        raise InvalidArgumentError(f"bad descriptor values: {exc}") from None
    raise InvalidArgumentError(f"unknown system type {kind!r}")


def to_descriptor(sys: LtiSystem) -> dict:
    if isinstance(sys, Fir):
        return {"type": "fir", "coeffs": list(sys.coeffs)}
    if isinstance(sys, SinglePole):
        return {"type": "single_pole", "rho": sys.rho, "c": sys.c, "d0": sys.d0}
    return {"type": "state_space", "A": [list(r) for r in sys.A],
            "b": list(sys.b), "c": list(sys.c), "d0": sys.d0}
