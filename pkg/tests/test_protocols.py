import io

import numpy as np
import pytest

from toeplitz_hinf.errors import InvalidArgumentError
from toeplitz_hinf.protocols import (
    GAP_CSV_HEADER,
    QueryOracle,
    fir_least_squares,
    fir_trials_for,
    gap_experiment,
    oracle_query,
    toeplitz_length_for,
    wahlberg_power_method,
    write_gap_csv,
)
from toeplitz_hinf.systems import Fir, SinglePole
from toeplitz_hinf.toeplitz import ToeplitzSection, operator_norm_dense, operator_norm_power

PAIR = Fir((1.0, 1.0))


def test_noiseless_oracle_is_convolution():
    oracle = QueryOracle(SinglePole(0.5, 1.0, 1.0), 4)
    y = oracle_query(oracle, np.array([1.0, 0.0, 0.0, 0.0]))
    np.testing.assert_allclose(y, [1.0, 1.0, 0.5, 0.25])
    assert oracle.query_count == 1 and oracle.samples_used == 4


def test_oracle_noise_is_seeded():
    u = np.ones(8) / np.sqrt(8)
    a = QueryOracle(PAIR, 8, 0.3, rng_seed=5)
    b = QueryOracle(PAIR, 8, 0.3, rng_seed=5)
    c = QueryOracle(PAIR, 8, 0.3, rng_seed=6)
    ya, yb, yc = a.query(u), b.query(u), c.query(u)
    np.testing.assert_array_equal(ya, yb)
    assert not np.array_equal(ya, yc)
    assert not np.array_equal(a.query(u), ya)  # fresh draw on every call


def test_oracle_input_checks():
    oracle = QueryOracle(PAIR, 3, unit_norm=True)
    with pytest.raises(InvalidArgumentError):
        oracle.query(np.ones(4))
    with pytest.raises(InvalidArgumentError):
        oracle.query(np.ones(3))
    with pytest.raises(InvalidArgumentError):
        QueryOracle(PAIR, 0)
    with pytest.raises(InvalidArgumentError):
        QueryOracle(PAIR, 3, noise_sigma=-1.0)


@pytest.mark.parametrize("sys", [PAIR, SinglePole(0.5, 1.0, 1.0), Fir((0.5, -0.3, 0.8, 0.1))], ids=str)
def test_noiseless_power_method_matches_matvec_path(sys):
    n = 48
    est = operator_norm_power(ToeplitzSection.from_system(sys, n), tol=1e-13, seed=3)
    trace = wahlberg_power_method(QueryOracle(sys, n), iters=100_000, tol=1e-13, seed=3)
    assert trace.final.value == pytest.approx(est.value, abs=1e-12)


def test_power_method_query_accounting():
    oracle = QueryOracle(PAIR, 16, 0.1, 1)
    trace = wahlberg_power_method(oracle, iters=7, repeats=3)
    assert trace.queries_used == 2 * 7 * 3
    assert trace.samples_used == 16 * trace.queries_used
    assert len(trace.estimates) == 7 and trace.final.iterations == 7


def test_noisy_power_method_is_close():
    n = 64
    trace = wahlberg_power_method(QueryOracle(PAIR, n, 0.01, 11), iters=200, repeats=100, seed=11)
    dense = operator_norm_dense(ToeplitzSection([1.0, 1.0], n))
    assert abs(trace.final.value - dense) <= 0.05


def test_fir_least_squares_noiseless_is_exact():
    est = fir_least_squares(QueryOracle(Fir((0.7, -1.2)), 2), 1)
    assert est.g0_hat == pytest.approx(0.7) and est.g1_hat == pytest.approx(-1.2)
    assert est.hinf_err_bound == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(InvalidArgumentError):
        fir_least_squares(QueryOracle(PAIR, 3), 1)


def test_fir_error_bound_dominates_exact_error():
    est = fir_least_squares(QueryOracle(Fir((1.0, -2.0)), 2, 0.5, 4), 3)
    assert est.hinf_err <= est.hinf_err_bound + 1e-15


def test_fir_error_scales_like_sigma_over_sqrt_trials():
    def mean_err(trials):
        return np.mean([fir_least_squares(QueryOracle(PAIR, 2, 0.1, s), trials).hinf_err_bound
                        for s in range(20)])

    ratio = mean_err(16) / mean_err(1024)
    assert ratio == pytest.approx(8.0, rel=0.35)


def test_fir_error_independent_of_amplitude():
    errs = [fir_least_squares(QueryOracle(Fir((a, a)), 2, 0.1, 9), 64).hinf_err_bound
            for a in (1.0, 10.0, 100.0)]
    assert max(errs) - min(errs) <= 1e-10


def test_toeplitz_length_for_pair_symbol():
    # 2a (1 - cos(pi / (2n + 1))) <= eps
    n, limited = toeplitz_length_for(PAIR, 0.1)
    assert not limited
    gap = lambda k: 2 * (1 - np.cos(np.pi / (2 * k + 1)))  # noqa: E731
    assert gap(n) <= 0.1 < gap(n - 1)
    n, limited = toeplitz_length_for(Fir((100.0, 100.0)), 0.1, dense_limit=32)
    assert limited and n == 32


def test_fir_trials_search():
    trials, err = fir_trials_for(PAIR, 0.01, 0.1, seed=0)
    assert err <= 0.01
    assert trials & (trials - 1) == 0


def test_gap_experiment_rows_and_csv():
    rows = gap_experiment([1.0, 10.0, 100.0], 0.1, 0.1, seed=0)
    assert [r.n_star_toeplitz for r in rows] == [5, 16, 50]
    assert rows[2].n_star_toeplitz / rows[0].n_star_toeplitz >= 5
    assert rows[2].trials_fir / rows[0].trials_fir <= 2
    buf = io.StringIO()
    write_gap_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(GAP_CSV_HEADER)
    assert len(lines) == 4 and lines[1].startswith("1,0.10000000000000001,5,")
