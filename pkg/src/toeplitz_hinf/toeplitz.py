"""Finite sections of causal Toeplitz (convolution) operators.

``T_n(g)`` is the n x n lower-triangular matrix ``(g_{j-k})``.  Products
with it are convolutions truncated to the first n samples; products with
its transpose use time reversal, ``T_n^T = J T_n J`` with J the flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate

import numpy as np
import scipy.fft
import scipy.linalg

from .errors import InvalidArgumentError, ResourceError

__all__ = [
    "ToeplitzSection",
    "TrigPolynomial",
    "NormEstimate",
    "DENSE_LIMIT",
    "DIRECT_LIMIT",
    "toeplitz_matvec",
    "adjoint_matvec",
    "dense_matrix",
    "operator_norm_dense",
    "operator_norm_power",
    "power_iterate",
    "trig_poly",
    "trig_poly_l2_check",
    "fejer_m",
    "fejer_vector",
    "laurent_toeplitz",
    "laurent_hankel",
    "widom_terms",
    "widom_residual",
    "tridiag_lambda_max",
]

DENSE_LIMIT = 2048
DIRECT_LIMIT = 256


@dataclass(frozen=True)
class ToeplitzSection:
    """Upper-left n x n corner of the causal Toeplitz operator of ``symbol_coeffs``.

    Coefficients beyond index n - 1 never enter the section and are dropped.
    """

    symbol_coeffs: np.ndarray
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidArgumentError(f"section size must be a positive integer, got {self.n}")
        g = np.ravel(np.asarray(self.symbol_coeffs, dtype=float))
        if g.size == 0:
            raise InvalidArgumentError("symbol needs at least one coefficient")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "symbol_coeffs", g[: int(self.n)].copy())

    @classmethod
    def from_system(cls, sys, n):
        from .systems import impulse_response

        return cls(impulse_response(sys, n).coeffs, n)


@dataclass(frozen=True)
class TrigPolynomial:
    """Coefficients of ``(1 + z + ... + z^m)^t`` as exact integers."""

    m: int
    t: int
    coeffs: tuple


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    converged: bool
    residual: float
    history: tuple = ()


# --------------------------------------------------------------------------
# products

def _check_len(sec, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (sec.n,):
        raise InvalidArgumentError(f"expected a vector of length {sec.n}, got shape {x.shape}")
    return x


def _direct(g, x, n):
    return np.convolve(x, g)[:n]


def _transform(g, x, n):
    size = scipy.fft.next_fast_len(2 * n, real=True)
    y = scipy.fft.irfft(scipy.fft.rfft(x, size) * scipy.fft.rfft(g, size), size)
    return y[:n]


def toeplitz_matvec(sec: ToeplitzSection, x, method: str = "auto") -> np.ndarray:
    """``T_n x``, i.e. the first n samples of ``g * x``.

    ``method`` is ``"direct"``, ``"fft"`` or ``"auto"`` (direct up to
    ``DIRECT_LIMIT``).
    """
    x = _check_len(sec, x)
    if method == "auto":
        method = "direct" if sec.n <= DIRECT_LIMIT else "fft"
    if method == "direct":
        return _direct(sec.symbol_coeffs, x, sec.n)
    if method == "fft":
        return _transform(sec.symbol_coeffs, x, sec.n)
    raise InvalidArgumentError(f"unknown method {method!r}")


def adjoint_matvec(sec: ToeplitzSection, u, method: str = "auto") -> np.ndarray:
    """``T_n^T u`` by time reversal: flip, convolve, flip."""
    u = _check_len(sec, u)
    return toeplitz_matvec(sec, u[::-1], method)[::-1]


def dense_matrix(sec: ToeplitzSection) -> np.ndarray:
    col = np.zeros(sec.n)
    col[: sec.symbol_coeffs.size] = sec.symbol_coeffs
    return scipy.linalg.toeplitz(col, np.zeros(sec.n))


# --------------------------------------------------------------------------
# operator norms

def operator_norm_dense(sec: ToeplitzSection, dense_limit: int = DENSE_LIMIT) -> float:
    """Largest singular value from a dense symmetric eigensolve of ``T^T T``."""
    if sec.n > dense_limit:
        raise ResourceError(f"section size {sec.n} exceeds the dense limit {dense_limit}")
    T = dense_matrix(sec)
    # T^T T via a symmetric rank-k update; only the lower triangle is formed
    gram = scipy.linalg.blas.dsyrk(1.0, T, trans=1, lower=1)
    top = scipy.linalg.eigh(gram, lower=True, eigvals_only=True,
                            subset_by_index=[sec.n - 1, sec.n - 1])[0]
    return math.sqrt(max(float(top), 0.0))


def power_iterate(forward, adjoint, n, tol=1e-12, max_iters=100_000, seed=0,
                  record=False):
    """Power iteration on ``adjoint(forward(.))`` from a seeded Gaussian start.

    The value reported after each sweep is ``||forward(v)||`` for the current
    unit vector v, which never exceeds the operator norm.  Iteration stops
    when the relative change of the value drops below ``tol``.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    history = []
    prev = None
    value = 0.0
    residual = math.inf
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        w = forward(v)
        value = float(np.linalg.norm(w))
        if record:
            history.append(value)
        if value == 0.0:
            residual, converged = 0.0, True
            break
        if prev is not None:
            residual = abs(value - prev) / value
            if residual < tol:
                converged = True
                break
        prev = value
        z = adjoint(w)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            residual, converged = 0.0, True
            break
        v = z / nz
    return NormEstimate(value, it, converged, residual, tuple(history))


def operator_norm_power(sec: ToeplitzSection, tol: float = 1e-12,
                        max_iters: int = 100_000, seed: int = 0) -> NormEstimate:
    """Power-iteration estimate of ``||T_n||`` using only matvecs."""
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    return power_iterate(lambda v: toeplitz_matvec(sec, v),
                         lambda u: adjoint_matvec(sec, u),
                         sec.n, tol, max_iters, seed)


# --------------------------------------------------------------------------
# trigonometric polynomials p_m^t

def trig_poly(m: int, t: int) -> TrigPolynomial:
    if m < 1 or t < 1:
        raise InvalidArgumentError("m and t must be positive integers")
    coeffs = [1]
    for _ in range(t):
        # multiply by 1 + z + ... + z^m: sliding window sum of width m + 1
        padded = coeffs + [0] * m
        csum = [0, *accumulate(padded)]
        coeffs = [csum[k + 1] - csum[max(0, k - m)] for k in range(len(padded))]
    return TrigPolynomial(m, t, tuple(coeffs))


def trig_poly_l2_check(m: int, t: int, log: bool = False):
    """``(exact, lower)`` for the squared L2 norm of ``p_m^t`` on the circle.

    ``exact = 2 pi sum |c_k|^2`` (measure d theta) and
    ``lower = 16 / (9 pi) * t**-0.5 * (m+1)**(2t-1)``.  With ``log=True``
    both are returned as natural logarithms, which never overflow.
    """
    if m < 1 or t < 1:
        raise InvalidArgumentError("m and t must be positive integers")
    if m * t > 10_000:
        raise InvalidArgumentError("m * t must not exceed 10000")
    total = sum(c * c for c in trig_poly(m, t).coeffs)
    log_exact = math.log(2 * math.pi) + math.log(total)
    log_lower = (math.log(16 / (9 * math.pi)) - 0.5 * math.log(t)
                 + (2 * t - 1) * math.log(m + 1))
    if log:
        return log_exact, log_lower
    try:
        return 2 * math.pi * float(total), math.exp(log_lower)
    except OverflowError:
        raise OverflowError(
            f"norm of p_{m}^{t} exceeds float range; use log=True") from None


def fejer_m(n: int) -> int:
    """``m = ceil(n/2 - 1)``, so that ``2m < n <= 2(m+1)``."""
    return math.ceil(n / 2 - 1)


def fejer_vector(n: int) -> np.ndarray:
    """Coefficients of ``p_m^2`` zero-padded to length n, m = fejer_m(n)."""
    m = fejer_m(n)
    x = np.zeros(n)
    if m >= 1:
        c = np.array(trig_poly(m, 2).coeffs, dtype=float)
        x[: c.size] = c
    else:
        x[0] = 1.0
    return x


# --------------------------------------------------------------------------
# Laurent symbols and the Widom decomposition

def _coeff(a, offset, k):
    """a_k for a window ``a`` whose entry ``offset`` holds index 0."""
    k = np.asarray(k) + offset
    out = np.zeros(k.shape)
    ok = (k >= 0) & (k < len(a))
    out[ok] = np.asarray(a, dtype=float)[k[ok]]
    return out


def laurent_toeplitz(a, n, offset=0):
    """Dense ``T_n(a) = (a_{j-k})`` for a Laurent window."""
    j, k = np.indices((n, n))
    return _coeff(a, offset, j - k)


def laurent_hankel(a, rows, cols, offset=0):
    """Block ``(a_{j+k+1})`` of the Hankel operator."""
    j, k = np.indices((rows, cols))
    return _coeff(a, offset, j + k + 1)


def _tilde(a, offset):
    # coefficients of a(1/z): a_{-k}
    return np.asarray(a, dtype=float)[::-1], len(a) - 1 - offset


def widom_terms(a, b, n, truncation=None, a_offset=0, b_offset=0):
    """Dense pieces of ``T_n(a)T_n(b) = T_n(ab) - P H(a)H(b~) P - W H(a~)H(b) W``.

    ``a_offset``/``b_offset`` give the position of the index-0 coefficient
    in each window (0 means causal).  Returns a dict with keys ``lhs``,
    ``product``, ``p_term`` and ``w_term``.
    """
    a = np.ravel(np.asarray(a, dtype=float))
    b = np.ravel(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0 or n < 1:
        raise InvalidArgumentError("symbols must be nonempty and n positive")
    extent = max(a_offset, a.size - 1 - a_offset, b_offset, b.size - 1 - b_offset)
    needed = n + 2 * extent
    if truncation is None:
        truncation = needed
    if truncation < needed:
        raise InvalidArgumentError(f"truncation {truncation} < n + 2d = {needed}")
    ab = np.convolve(a, b)
    ab_offset = a_offset + b_offset
    at, at_off = _tilde(a, a_offset)
    bt, bt_off = _tilde(b, b_offset)
    lhs = laurent_toeplitz(a, n, a_offset) @ laurent_toeplitz(b, n, b_offset)
    product = laurent_toeplitz(ab, n, ab_offset)
    p_term = (laurent_hankel(a, n, truncation, a_offset)
              @ laurent_hankel(bt, truncation, n, bt_off))
    w_inner = (laurent_hankel(at, n, truncation, at_off)
               @ laurent_hankel(b, truncation, n, b_offset))
    w_term = w_inner[::-1, ::-1]
    return {"lhs": lhs, "product": product, "p_term": p_term, "w_term": w_term}


def widom_residual(a_coeffs, b_coeffs, n, truncation=None, a_offset=0, b_offset=0):
    """Max-abs entry of ``T_n(a)T_n(b) - (T_n(ab) - P-term - W-term)``."""
    t = widom_terms(a_coeffs, b_coeffs, n, truncation, a_offset, b_offset)
    resid = t["lhs"] - (t["product"] - t["p_term"] - t["w_term"])
    return float(np.max(np.abs(resid)))


def tridiag_lambda_max(a0: float, a1: float, n: int) -> float:
    """Top eigenvalue of the n x n tridiagonal matrix with diagonal
    ``a0^2 + a1^2`` and off-diagonal ``a0 a1``."""
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    return a0 * a0 + a1 * a1 + 2.0 * abs(a0 * a1) * math.cos(math.pi / (n + 1))
