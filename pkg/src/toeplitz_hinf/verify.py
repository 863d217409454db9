"""Self-checks for the facts the gap bounds rest on.

Each check returns a :class:`Check`; :func:`run_checks` runs them all with
fixed seeds so repeated runs print identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    C1,
    C2,
    bg_lower_bound,
    optimize_gamma,
    smoothness_exact_fir,
    smoothness_from_decay,
    smoothness_violation,
)
from .systems import Fir, SinglePole, StateSpace, decay_certificate, frequency_response, hinf_norm
from .toeplitz import (
    ToeplitzSection,
    adjoint_matvec,
    operator_norm_dense,
    toeplitz_matvec,
    tridiag_lambda_max,
    trig_poly_l2_check,
    widom_residual,
)

__all__ = ["Check", "CHECKS", "run_checks", "SUITE_SYSTEMS"]

TOL = 1e-10

SUITE_SYSTEMS = (
    SinglePole(0.5, 1.0, 1.0),
    SinglePole(0.8, 2.0, 0.0),
    SinglePole(0.3, 0.5, 1.0),
    Fir((1.0, 1.0)),
    Fir((1.0, 0.0, -1.0)),
    Fir((0.5, -0.3, 0.8, 0.1)),
    StateSpace(((0.0, 0.81), (1.0, 0.0)), (1.0, 0.0), (0.0, 1.0), 0.5),
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def check_widom(pairs=50, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        da, db = rng.integers(0, 9, size=2)
        a, b = rng.standard_normal(da + 1), rng.standard_normal(db + 1)
        a_off, b_off = int(rng.integers(0, da + 1)), int(rng.integers(0, db + 1))
        n = int(rng.integers(1, 65))
        worst = max(worst, widom_residual(a, b, n, a_offset=a_off, b_offset=b_off))
    return Check("widom", worst <= TOL, f"max residual {worst:.3e} over {pairs} pairs")


def check_trig_poly(max_mt=16):
    worst = math.inf
    for m in range(1, max_mt + 1):
        for t in range(1, max_mt + 1):
            exact, lower = trig_poly_l2_check(m, t, log=True)
            worst = min(worst, exact - lower)
    return Check("trig_poly_lower_bound", worst >= 0,
                 f"min log(exact/lower) {worst:.4f} for 1 <= m, t <= {max_mt}")


def check_inequalities(points=20001):
    failures = []
    x = np.linspace(0.0, np.pi / 4, points)
    if np.any(1 - np.cos(x) < (8 / np.pi ** 2) * (2 - np.sqrt(2)) * x ** 2 - TOL):
        failures.append("1-cos")
    s, t = np.meshgrid(np.geomspace(1e-3, 1e3, 201), np.geomspace(1e-3, 1e3, 201))
    if np.any(np.sqrt(t) > np.sqrt(s) + (t - s) / (2 * np.sqrt(s)) + TOL):
        failures.append("sqrt-concavity")
    th = np.linspace(-np.pi / 2, np.pi / 2, points)
    if np.any(np.abs(np.sin(th)) < (2 / np.pi) * np.abs(th) - TOL):
        failures.append("sin-lower")
    for k in range(1, 33):
        th = np.linspace(-1 / (2 * k), 1 / (2 * k), 2002)  # even count skips 0
        ratio = np.sin(k * th) / np.sin(th)
        if np.any(ratio < -TOL) or np.any(ratio > k + TOL):
            failures.append(f"dirichlet-{k}")
            break
    return Check("inequalities", not failures,
                 "all hold" if not failures else "violated: " + ", ".join(failures))


def check_series(rhos=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9), terms=3000):
    worst = 0.0
    k = np.arange(1, terms + 1, dtype=float)
    for r in rhos:
        s1 = math.fsum(k * k * r ** (k - 1))
        s2 = math.fsum(k * k * r ** k)
        e1 = (1 + r) / (1 - r) ** 3
        e2 = r * (1 + r) / (1 - r) ** 3
        worst = max(worst, abs(s1 - e1) / e1, abs(s2 - e2) / e2)
    return Check("series_identities", worst <= TOL, f"max relative error {worst:.3e}")


def check_adjoint(trials=100, seed=1):
    rng = np.random.default_rng(seed)
    worst_adj = worst_path = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 1025))
        sec = ToeplitzSection(rng.standard_normal(int(rng.integers(1, 10))), n)
        x, y = rng.standard_normal(n), rng.standard_normal(n)
        lhs = toeplitz_matvec(sec, x) @ y
        rhs = x @ adjoint_matvec(sec, y)
        scale = np.linalg.norm(toeplitz_matvec(sec, x)) * np.linalg.norm(y) or 1.0
        worst_adj = max(worst_adj, abs(lhs - rhs) / scale)
        d, f = toeplitz_matvec(sec, x, "direct"), toeplitz_matvec(sec, x, "fft")
        worst_path = max(worst_path, np.max(np.abs(d - f)) / (np.max(np.abs(d)) or 1.0))
    ok = worst_adj <= 1e-12 and worst_path <= 1e-12
    return Check("adjoint_and_matvec_paths", ok,
                 f"adjoint {worst_adj:.3e}, direct vs fft {worst_path:.3e}")


def check_courant(ns=(1, 2, 3, 5, 8, 16, 64, 256)):
    worst = -math.inf
    for a0, a1 in ((1.0, 1.0), (2.0, 0.5), (0.3, 1.7), (1.0, 0.0)):
        for n in ns:
            sq = operator_norm_dense(ToeplitzSection([a0, a1], n)) ** 2
            worst = max(worst, sq - tridiag_lambda_max(a0, a1, n))
    return Check("courant_tridiagonal", worst <= 1e-12,
                 f"max ||T_n||^2 - lambda_max(K) = {worst:.3e}")


def check_smoothness(systems=SUITE_SYSTEMS):
    worst = -math.inf
    for sys in systems:
        peak2 = hinf_norm(sys).norm ** 2
        certs = [smoothness_from_decay(decay_certificate(sys), sys)]
        if isinstance(sys, SinglePole):
            certs.append(smoothness_from_decay(decay_certificate(sys, exact=True), sys))
        if isinstance(sys, Fir):
            certs.append(smoothness_exact_fir(sys.coeffs))
        for cert in certs:
            worst = max(worst, smoothness_violation(sys, cert) / peak2)
    return Check("smoothness_certificates", worst <= 1e-12,
                 f"max relative violation {worst:.3e} on 4096-point grids")


def check_single_pole_curvature(rho=0.5, c=1.0, d=1.0, h=1e-4):
    sys = SinglePole(rho, c, d)
    f = lambda t: abs(frequency_response(sys, t)) ** 2  # noqa: E731
    fd = (f(h) - 2 * f(0.0) + f(-h)) / h ** 2
    expected = -(2 * d * c * (1 - rho ** 2) + 2 * c * c * rho) / (1 - rho) ** 4
    rel = abs(fd - expected) / abs(expected)
    return Check("single_pole_curvature", rel <= 1e-3,
                 f"finite difference {fd:.6f} vs {expected:.6f}")


def check_soundness(c1=C1, c2=C2, ns=(3, 10, 30, 100, 300, 1000)):
    """Gap bound with optimized gamma vs the dense finite-section gap."""
    failures = 0
    worst = -math.inf
    for sys in SUITE_SYSTEMS:
        peak = hinf_norm(sys).norm
        for n in ns:
            gap = peak - operator_norm_dense(ToeplitzSection.from_system(sys, n))
            _, report = optimize_gamma(sys, n, c1=c1, c2=c2)
            worst = max(worst, gap - report.gap_bound)
            if gap > report.gap_bound + 1e-9:
                failures += 1
    return Check("gap_bound_soundness", failures == 0,
                 f"{failures} violations; max gap - bound = {worst:.3e}")


def check_lower_bound(c1=C1, c2=C2, ns=(3, 10, 100, 1000)):
    """Lower bound with exact certificates never exceeds the dense norm."""
    failures = 0
    for sys in SUITE_SYSTEMS:
        if isinstance(sys, SinglePole):
            cert = decay_certificate(sys, exact=True)
            L = smoothness_from_decay(cert).l_const
            C, rho = cert.c_const, cert.rho
        elif isinstance(sys, Fir):
            g = np.abs(np.asarray(sys.coeffs))
            rho = 0.5
            C = max([g[k] / rho ** (k - 1) for k in range(1, g.size)] + [0.0])
            L = smoothness_exact_fir(sys.coeffs).l_const
        else:
            continue
        peak = hinf_norm(sys).norm
        for n in ns:
            lb = bg_lower_bound(peak, L, C, rho, n, c1, c2).lower_bound
            if lb > operator_norm_dense(ToeplitzSection.from_system(sys, n)) + 1e-9:
                failures += 1
    return Check("lower_bound_soundness", failures == 0, f"{failures} violations")


CHECKS = (
    check_widom,
    check_trig_poly,
    check_inequalities,
    check_series,
    check_adjoint,
    check_courant,
    check_smoothness,
    check_single_pole_curvature,
    check_soundness,
    check_lower_bound,
)


def run_checks(c1=C1, c2=C2) -> list:
    results = []
    for fn in CHECKS:
        if fn in (check_soundness, check_lower_bound):
            results.append(fn(c1=c1, c2=c2))
        else:
            results.append(fn())
    return results
