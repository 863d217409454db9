"""Sweeps of ``||T_n||`` against ``||G||_inf`` and the gap bound, with CSV output."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import C1, C2, optimize_gamma, theorem1_gap_bound
from .errors import InvalidArgumentError
from .systems import LtiSystem, hinf_norm
from .toeplitz import DENSE_LIMIT, ToeplitzSection, operator_norm_dense, operator_norm_power

__all__ = [
    "SweepConfig",
    "SweepRow",
    "SWEEP_CSV_HEADER",
    "log_spaced_ints",
    "toeplitz_norm",
    "sweep",
    "check_sweep",
    "write_sweep_csv",
    "format_number",
]

SWEEP_CSV_HEADER = ("n", "toeplitz_norm", "hinf_norm", "gap", "theorem1_bound", "gamma_star")
GAP_SLACK = 1e-9


def format_number(x) -> str:
    """17 significant digits, so values round-trip exactly."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def log_spaced_ints(lo: int, hi: int, count: int) -> list:
    """``count`` distinct, roughly log-spaced integers from lo to hi inclusive."""
    if lo < 1 or hi < lo or count < 1:
        raise InvalidArgumentError("need 1 <= lo <= hi and count >= 1")
    count = min(count, hi - lo + 1)
    if count == 1:
        return [lo]
    raw = np.rint(np.geomspace(lo, hi, count)).astype(int)
    out = []
    for i, v in enumerate(raw):
        v = max(int(v), out[-1] + 1 if out else lo)
        out.append(min(v, hi - (count - 1 - i)))
    return out


@dataclass
class SweepConfig:
    system: LtiSystem
    n_list: list
    eps: float | None = None
    gamma: float | None = None
    seed: int = 0
    out: str | None = None
    with_bounds: bool = True
    dense_limit: int = DENSE_LIMIT
    c1: float = field(default=C1, repr=False)
    c2: float = field(default=C2, repr=False)

    def __post_init__(self):
        n_list = [int(n) for n in self.n_list]
        if not n_list:
            raise InvalidArgumentError("n_list is empty")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise InvalidArgumentError("n_list must be strictly increasing")
        if self.with_bounds and n_list[0] < 3:
            raise InvalidArgumentError("bound evaluation needs n >= 3")
        if n_list[0] < 1:
            raise InvalidArgumentError("n must be positive")
        self.n_list = n_list


@dataclass(frozen=True)
class SweepRow:
    n: int
    toeplitz_norm: float
    hinf_norm: float
    gap: float
    theorem1_bound: float
    gamma_star: float

    def as_csv(self):
        return [self.n] + [format_number(getattr(self, k)) for k in SWEEP_CSV_HEADER[1:]]


def toeplitz_norm(sys: LtiSystem, n: int, dense_limit: int = DENSE_LIMIT, seed: int = 0):
    """``(value, method)``: dense up to the limit, power iteration above it."""
    sec = ToeplitzSection.from_system(sys, n)
    if n <= dense_limit:
        return operator_norm_dense(sec, dense_limit), "dense"
    est = operator_norm_power(sec, tol=1e-13, max_iters=200_000, seed=seed)
    return est.value, "power"


def sweep(config: SweepConfig) -> list:
    """Rows ordered by n; bounds use ``config.gamma`` or the optimized gamma."""
    sys = config.system
    peak = hinf_norm(sys).norm
    rows = []
    for n in config.n_list:
        value, _ = toeplitz_norm(sys, n, config.dense_limit, config.seed)
        bound = gamma = math.nan
        if config.with_bounds:
            if config.gamma is None:
                gamma, report = optimize_gamma(sys, n, c1=config.c1, c2=config.c2)
            else:
                gamma = config.gamma
                report = theorem1_gap_bound(sys, gamma, n, c1=config.c1, c2=config.c2)
            bound = report.gap_bound
        rows.append(SweepRow(n, value, peak, peak - value, bound, gamma))
    return rows


def check_sweep(rows) -> list:
    """Rows that violate ``-slack <= gap <= bound + slack``; empty when sound."""
    bad = []
    for r in rows:
        if r.gap < -GAP_SLACK:
            bad.append((r, "negative gap"))
        elif not math.isnan(r.theorem1_bound) and r.gap > r.theorem1_bound + GAP_SLACK:
            bad.append((r, "gap exceeds bound"))
    return bad


def write_sweep_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for r in rows:
        writer.writerow(r.as_csv())
