"""Black-box access to a system and two ways of estimating its H-infinity norm.

A :class:`QueryOracle` answers "apply input u for n steps" with the first n
output samples corrupted by Gaussian noise.  On top of it sit

* the time-reversal power method, which only ever sees oracle outputs, and
* FIR identification of a length-2 filter by least squares,

plus the experiment comparing how much data each needs on
``G(z) = a + a z^-1``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgumentError, ResourceError
from .experiments import format_number
from .systems import Fir, LtiSystem, hinf_norm, impulse_response
from .toeplitz import (
    DENSE_LIMIT,
    NormEstimate,
    ToeplitzSection,
    operator_norm_dense,
    power_iterate,
    toeplitz_matvec,
)

__all__ = [
    "QueryOracle",
    "PowerTrace",
    "FirEstimate",
    "GapExperimentRow",
    "oracle_query",
    "wahlberg_power_method",
    "fir_least_squares",
    "toeplitz_length_for",
    "fir_trials_for",
    "gap_experiment",
    "write_gap_csv",
    "GAP_CSV_HEADER",
]

GAP_CSV_HEADER = ("a", "eps", "n_star_toeplitz", "trials_fir", "fir_err")


class QueryOracle:
    """Noisy length-``horizon`` experiments on ``sys``.

    Each call to :meth:`query` draws fresh noise from the oracle's own seeded
    stream and increments ``query_count``.  With ``unit_norm=True`` inputs
    must satisfy ``||u||_2 <= 1``.
    """

    def __init__(self, sys: LtiSystem, horizon: int, noise_sigma: float = 0.0,
                 rng_seed: int = 0, unit_norm: bool = False):
        if horizon < 1:
            raise InvalidArgumentError("horizon must be positive")
        if noise_sigma < 0:
            raise InvalidArgumentError("noise_sigma must be nonnegative")
        self.sys = sys
        self.horizon = int(horizon)
        self.noise_sigma = float(noise_sigma)
        self.rng_seed = rng_seed
        self.unit_norm = unit_norm
        self.query_count = 0
        self._rng = np.random.default_rng(rng_seed)
        self._section = ToeplitzSection.from_system(sys, self.horizon)

    @property
    def samples_used(self):
        return self.query_count * self.horizon

    def query(self, u):
        u = np.asarray(u, dtype=float)
        if u.shape != (self.horizon,):
            raise InvalidArgumentError(
                f"input must have length {self.horizon}, got shape {u.shape}")
        if self.unit_norm and np.linalg.norm(u) > 1.0 + 1e-12:
            raise InvalidArgumentError(
                f"input norm {np.linalg.norm(u):.6g} exceeds 1")
        noise = self._rng.standard_normal(self.horizon)
        self.query_count += 1
        return toeplitz_matvec(self._section, u) + self.noise_sigma * noise


def oracle_query(oracle: QueryOracle, u) -> np.ndarray:
    return oracle.query(u)


@dataclass(frozen=True)
class PowerTrace:
    estimates: tuple
    final: NormEstimate
    queries_used: int
    samples_used: int


def _averaged(oracle, u, repeats):
    # query at unit norm and rescale, so the input constraint always holds
    scale = float(np.linalg.norm(u))
    if scale == 0.0:
        return np.zeros_like(u)
    unit = u / scale
    acc = oracle.query(unit)
    for _ in range(repeats - 1):
        acc = acc + oracle.query(unit)
    return scale * acc / repeats


def wahlberg_power_method(oracle: QueryOracle, iters: int, repeats: int = 1,
                          tol: float | None = None, seed: int = 0) -> PowerTrace:
    """Power iteration on ``T_n^T T_n`` driven only by oracle queries.

    The forward product is one experiment; the adjoint product is the
    experiment on the time-reversed signal, reversed again.  Every product
    averages ``repeats`` experiments.  Without ``tol`` exactly ``iters``
    sweeps run, costing ``2 * iters * repeats`` queries.
    """
    if iters < 1 or repeats < 1:
        raise InvalidArgumentError("iters and repeats must be positive")
    start = oracle.query_count

    def forward(v):
        return _averaged(oracle, v, repeats)

    def adjoint(w):
        return _averaged(oracle, w[::-1], repeats)[::-1]

    # with tol=None the convergence test never fires; the last sweep still
    # queries the adjoint so every sweep costs the same
    est = power_iterate(forward, adjoint, oracle.horizon,
                        tol=-1.0 if tol is None else tol, max_iters=iters,
                        seed=seed, record=True)
    if tol is None and est.value > 0.0:
        est = NormEstimate(est.value, est.iterations, False, est.residual, est.history)
    used = oracle.query_count - start
    return PowerTrace(est.history, est, used, used * oracle.horizon)


class FirEstimate(NamedTuple):
    g0_hat: float
    g1_hat: float
    hinf_err_bound: float
    hinf_err: float


def fir_least_squares(oracle: QueryOracle, trials: int, truth=None) -> FirEstimate:
    """Identify ``g_0 + g_1 z^-1`` from ``trials`` impulse experiments.

    Each trial applies ``u = e_0`` on a horizon-2 oracle; the coefficients
    are the least-squares fit to the stacked responses.  The error is
    measured against ``truth`` (two coefficients) or, in simulation, against
    the oracle's own system: ``hinf_err_bound = |dg_0| + |dg_1|`` and
    ``hinf_err`` is the exact H-infinity norm of the difference.
    """
    if trials < 1:
        raise InvalidArgumentError("need at least one trial")
    if oracle.horizon != 2:
        raise InvalidArgumentError("FIR identification uses a horizon-2 oracle")
    u = np.array([1.0, 0.0])
    design = np.array([[u[0], 0.0], [u[1], u[0]]])
    ys = np.stack([oracle.query(u) for _ in range(trials)])
    X = np.tile(design, (trials, 1))
    g_hat, *_ = np.linalg.lstsq(X, ys.reshape(-1), rcond=None)
    if truth is None:
        truth = impulse_response(oracle.sys, 2).coeffs
    diff = g_hat - np.asarray(truth, dtype=float)[:2]
    err = float(np.sum(np.abs(diff)))
    exact = hinf_norm(Fir(tuple(diff))).norm if np.any(diff) else 0.0
    return FirEstimate(float(g_hat[0]), float(g_hat[1]), err, exact)


# --------------------------------------------------------------------------
# data needed by each method on G(z) = a + a z^-1

@dataclass(frozen=True)
class GapExperimentRow:
    a: float
    eps: float
    n_star_toeplitz: int
    trials_fir: int
    fir_err: float
    limit_reached: bool = False


def toeplitz_length_for(sys: LtiSystem, eps: float, dense_limit: int = DENSE_LIMIT):
    """Smallest n with ``||G||_inf - ||T_n||_dense <= eps``.

    Returns ``(n, limit_reached)``; when the dense limit is hit first the
    limit itself is returned with ``limit_reached=True``.
    """
    target = hinf_norm(sys).norm

    def ok(n):
        sec = ToeplitzSection.from_system(sys, n)
        return target - operator_norm_dense(sec, dense_limit) <= eps

    hi = 1
    while not ok(hi):
        if hi >= dense_limit:
            return dense_limit, True
        hi = min(2 * hi, dense_limit)
    lo = hi // 2
    if lo < 1:
        return hi, False
    while hi - lo > 1:  # ok(hi) holds, ok(lo) does not
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi, False


def fir_trials_for(sys: LtiSystem, eps: float, sigma: float, seed: int,
                   max_trials: int = 2 ** 24):
    """Smallest power-of-two trial count whose seeded estimate is eps-accurate.

    Returns ``(trials, error)``.
    """
    trials = 1
    while True:
        oracle = QueryOracle(sys, 2, sigma, seed, unit_norm=True)
        est = fir_least_squares(oracle, trials)
        if est.hinf_err_bound <= eps:
            return trials, est.hinf_err_bound
        if trials >= max_trials:
            raise ResourceError(
                f"FIR error {est.hinf_err_bound:.3g} still above {eps:g} at {trials} trials")
        trials *= 2


def gap_experiment(a_values, eps: float, sigma: float, seed: int,
                   dense_limit: int = DENSE_LIMIT) -> list:
    """One row per ``a``: Toeplitz length vs FIR trials for ``a + a z^-1``."""
    if not eps > 0:
        raise InvalidArgumentError("eps must be positive")
    rows = []
    for a in a_values:
        sys = Fir((float(a), float(a)))
        n_star, limited = toeplitz_length_for(sys, eps, dense_limit)
        trials, err = fir_trials_for(sys, eps, sigma, seed)
        rows.append(GapExperimentRow(float(a), float(eps), n_star, trials, err, limited))
    return rows


def write_gap_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(GAP_CSV_HEADER)
    for r in rows:
        writer.writerow([format_number(r.a), format_number(r.eps), r.n_star_toeplitz, r.trials_fir, format_number(r.fir_err)])
