"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with output capture
suspended, so it shows up in a plain ``pytest`` run, before asserting.  Run alone
with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import itertools
import math
import sys

import numpy as np
import pytest

from toeplitz_hinf.bounds import optimize_gamma, smoothness_exact_fir, smoothness_from_decay, smoothness_violation
from toeplitz_hinf.experiments import log_spaced_ints
from toeplitz_hinf.protocols import QueryOracle, gap_experiment, wahlberg_power_method
from toeplitz_hinf.systems import Fir, SinglePole, decay_certificate, frequency_response, hinf_norm
from toeplitz_hinf.toeplitz import (
    ToeplitzSection,
    operator_norm_dense,
    operator_norm_power,
    tridiag_lambda_max,
    trig_poly_l2_check,
    widom_residual,
)
from toeplitz_hinf.verify import SUITE_SYSTEMS, check_inequalities, check_series


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        return ok

    return emit


def test_01_gap_bound_soundness_sweep(report):
    ns = log_spaced_ints(3, 2000, 40)
    worst, violations, rows = -math.inf, 0, 0
    for rho, c, d in itertools.product((0.3, 0.5, 0.8), (0.5, 1.0, 2.0), (0.0, 1.0)):
        sys_ = SinglePole(rho, c, d)
        peak = hinf_norm(sys_).norm
        for n in ns:
            gap = peak - operator_norm_dense(ToeplitzSection.from_system(sys_, n))
            bound = optimize_gamma(sys_, n)[1].gap_bound
            worst = max(worst, gap - bound)
            violations += gap > bound + 1e-9
            rows += 1
    ok = violations == 0
    assert report(1, ok, f"{rows} rows, {violations} violations, max(gap - bound) = {worst:.3e}")


def test_02_pair_symbol_sharpness(report):
    ns = [2 ** k for k in range(4, 11)]
    norms = [operator_norm_dense(ToeplitzSection([1.0, 1.0], n)) for n in ns]
    slope = np.polyfit(np.log(ns), np.log([2.0 - v for v in norms]), 1)[0]
    excess = max(v * v - tridiag_lambda_max(1.0, 1.0, n) for v, n in zip(norms, ns))
    ok = -2.2 <= slope <= -1.8 and excess <= 1e-12
    assert report(2, ok, f"slope {slope:.4f}, max ||T_n||^2 - (2 + 2cos(pi/(n+1))) = {excess:.3e}")


def test_03_power_matches_dense(report):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        g = rng.uniform(0.0, 1.0, int(rng.integers(1, 10)))
        for n in (16, 64, 256):
            sec = ToeplitzSection(g, n)
            est = operator_norm_power(sec, tol=1e-15, max_iters=500_000, seed=7)
            dense = operator_norm_dense(sec)
            worst = max(worst, abs(est.value - dense) / dense)
    ok = worst <= 1e-8
    assert report(3, ok, f"max relative error {worst:.3e} over 60 sections")


def test_04_hand_values(report):
    t2 = operator_norm_dense(ToeplitzSection([1.0, 1.0], 2))
    t3 = operator_norm_dense(ToeplitzSection([1.0, 1.0], 3))
    ok = abs(t2 - 1.618034) <= 1e-6 and abs(t3 - 1.801938) <= 1e-6
    assert report(4, ok, f"||T_2|| = {t2:.7f}, ||T_3|| = {t3:.7f}")


def test_05_widom_identity(report):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        da, db = rng.integers(0, 9, size=2)
        a, b = rng.standard_normal(da + 1), rng.standard_normal(db + 1)
        n = int(rng.integers(1, 65))
        worst = max(worst, widom_residual(a, b, n, a_offset=int(rng.integers(0, da + 1)),
                                          b_offset=int(rng.integers(0, db + 1))))
    ok = worst <= 1e-10
    assert report(5, ok, f"max residual {worst:.3e} over 50 pairs")


def test_06_trig_poly_bound(report):
    bad = [(m, t) for m in range(1, 17) for t in range(1, 17)
           if trig_poly_l2_check(m, t)[0] < trig_poly_l2_check(m, t)[1]]
    exact, lower = trig_poly_l2_check(1, 1)
    ok = not bad and abs(exact - 12.566) <= 1e-3 and abs(lower - 1.1318) <= 1e-4
    assert report(6, ok, f"{len(bad)} failures on 16 x 16 grid; (1,1): {exact:.4f} vs {lower:.4f}")


def test_07_smoothness_tightness_and_validity(report):
    sys_ = SinglePole(0.5, 1.0, 1.0)
    h = 1e-4
    f = lambda t: abs(frequency_response(sys_, t)) ** 2  # noqa: E731
    fd = (f(h) - 2 * f(0.0) + f(-h)) / h ** 2
    rel = abs(fd + 40.0) / 40.0
    worst = -math.inf
    for s in SUITE_SYSTEMS:
        certs = [smoothness_from_decay(decay_certificate(s), s)]
        if isinstance(s, SinglePole):
            certs.append(smoothness_from_decay(decay_certificate(s, exact=True), s))
        if isinstance(s, Fir):
            certs.append(smoothness_exact_fir(s.coeffs))
        peak2 = hinf_norm(s).norm ** 2
        worst = max(worst, max(smoothness_violation(s, c, 4096) / peak2 for c in certs))
    ok = rel <= 1e-3 and worst <= 1e-12
    assert report(7, ok, f"second difference {fd:.5f} (rel err {rel:.1e}); "
                         f"max relative violation {worst:.3e}")


def test_08_gap_experiment(report):
    rows = {r.a: r for r in gap_experiment([1.0, 10.0, 100.0], 0.1, 0.1, seed=0)}
    n_ratio = rows[100.0].n_star_toeplitz / rows[1.0].n_star_toeplitz
    t_ratio = rows[100.0].trials_fir / rows[1.0].trials_fir
    ok = n_ratio >= 5 and t_ratio <= 2
    assert report(8, ok, f"n* ratio {n_ratio:.1f}, FIR trials ratio {t_ratio:.1f}")


def test_09_protocol_equivalence(report):
    worst = 0.0
    for g, n, seed in (([1.0, 1.0], 32, 0), ([0.5, -0.3, 0.8, 0.1], 48, 3), ([1.0, 0.5, 0.25], 64, 9)):
        sec = ToeplitzSection(g, n)
        direct = operator_norm_power(sec, tol=1e-13, seed=seed).value
        trace = wahlberg_power_method(QueryOracle(Fir(tuple(g)), n), 100_000, tol=1e-13, seed=seed)
        worst = max(worst, abs(trace.final.value - direct))
    noisy = wahlberg_power_method(QueryOracle(Fir((1.0, 1.0)), 64, 0.01, 11), 200, 100, seed=11)
    dense = operator_norm_dense(ToeplitzSection([1.0, 1.0], 64))
    err = abs(noisy.final.value - dense)
    ok = worst <= 1e-12 and err <= 0.05
    assert report(9, ok, f"noiseless max diff {worst:.1e}; noisy {noisy.final.value:.5f} "
                         f"vs dense {dense:.5f}")


def test_10_inequality_and_series_grids(report):
    checks = (check_inequalities(), check_series())
    ok = all(c.passed for c in checks)
    assert report(10, ok, "; ".join(f"{c.name}: {c.detail}" for c in checks))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
