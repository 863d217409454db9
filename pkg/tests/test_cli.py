import csv
import json
import math

import numpy as np
import pytest

from toeplitz_hinf import verify
from toeplitz_hinf.cli import main
from toeplitz_hinf.errors import InvalidArgumentError
from toeplitz_hinf.experiments import SweepConfig, check_sweep, log_spaced_ints, sweep
from toeplitz_hinf.systems import SinglePole

PAIR = '{"type": "fir", "coeffs": [1, 1]}'
POLE = '{"type": "single_pole", "rho": 0.5, "c": 1, "d0": 1}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(text.splitlines()))


# ----------------------------------------------------------------- sweep helpers

def test_log_spaced_ints():
    ns = log_spaced_ints(3, 2000, 40)
    assert len(ns) == 40 and ns[0] == 3 and ns[-1] == 2000
    assert all(b > a for a, b in zip(ns, ns[1:]))
    assert log_spaced_ints(3, 5, 10) == [3, 4, 5]


def test_sweep_config_validation():
    with pytest.raises(InvalidArgumentError):
        SweepConfig(SinglePole(0.5), [3, 3])
    with pytest.raises(InvalidArgumentError):
        SweepConfig(SinglePole(0.5), [2, 5])
    SweepConfig(SinglePole(0.5), [1, 2], with_bounds=False)


def test_sweep_rows_are_sound():
    rows = sweep(SweepConfig(SinglePole(0.5, 1.0, 1.0), [3, 10, 100]))
    assert [r.n for r in rows] == [3, 10, 100]
    assert check_sweep(rows) == []


# ----------------------------------------------------------------- norm

def test_norm_pair(capsys):
    code, out, _ = run(capsys, "norm", "--system", PAIR, "--n", "3")
    assert code == 0
    report = json.loads(out)
    assert report["hinf_norm"] == pytest.approx(2.0)
    assert report["toeplitz"][0]["toeplitz_norm"] == pytest.approx(1.801938, abs=1e-6)


def test_norm_single_pole_from_file(capsys, tmp_path):
    path = tmp_path / "pole.json"
    path.write_text(POLE)
    code, out, _ = run(capsys, "norm", "--system", str(path))
    assert code == 0 and json.loads(out)["hinf_norm"] == pytest.approx(3.0)


@pytest.mark.parametrize("system", ['{"type": "fir", "coeffs": [1, 1}',
                                    '{"type": "single_pole", "rho": 1.5}',
                                    "/no/such/file.json"])
def test_bad_systems_exit_2(capsys, system):
    code, out, err = run(capsys, "norm", "--system", system)
    assert code == 2 and out == "" and err.startswith("error:")


# ----------------------------------------------------------------- sweep

def test_sweep_verify(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, _, err = run(capsys, "sweep", "--system", POLE, "--nmin", "3", "--nmax", "2000",
                       "--points", "8", "--verify", "--out", str(out_path))
    assert code == 0 and "8 rows ok" in err
    rows = read_csv(out_path.read_text())
    assert list(rows[0]) == ["n", "toeplitz_norm", "hinf_norm", "gap", "theorem1_bound", "gamma_star"]
    for r in rows:
        assert float(r["gap"]) >= -1e-9
        assert float(r["gap"]) <= float(r["theorem1_bound"])


def test_sweep_single_row(capsys):
    code, out, _ = run(capsys, "sweep", "--system", POLE, "--n", "3")
    assert code == 0 and len(read_csv(out)) == 1


def test_sweep_pair_slope(capsys):
    code, out, _ = run(capsys, "sweep", "--system", PAIR, "--n", "16,32,64,128,256,512,1024")
    assert code == 0
    rows = read_csv(out)
    n = np.array([float(r["n"]) for r in rows])
    gap = np.array([float(r["gap"]) for r in rows])
    slope = np.polyfit(np.log(n), np.log(gap), 1)[0]
    assert -2.2 <= slope <= -1.8


def test_sweep_is_deterministic(capsys):
    args = ("sweep", "--system", POLE, "--n", "3,50,300", "--seed", "4")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_sweep_rejects_small_n(capsys):
    code, _, err = run(capsys, "sweep", "--system", POLE, "--n", "2")
    assert code == 2 and "n >= 3" in err


# ----------------------------------------------------------------- required-n

def test_required_n(capsys):
    code, out, _ = run(capsys, "required-n", "--system", POLE, "--eps", "0.0408")
    report = json.loads(out)
    assert code == 0 and 3 <= report["n"] <= 10_000
    assert report["report"]["gap_bound"] <= 0.0408
    assert 0.5 < report["gamma_star"] < 1
    code, out, _ = run(capsys, "required-n", "--system", POLE, "--eps", "3")
    assert json.loads(out)["n"] == 3


def test_required_n_bad_eps(capsys):
    code, _, _ = run(capsys, "required-n", "--system", POLE, "--eps", "-1")
    assert code == 2


# ----------------------------------------------------------------- power and gap

def test_power(capsys):
    code, out, _ = run(capsys, "power", "--system", PAIR, "--n", "64", "--sigma", "0.01",
                       "--repeats", "100", "--iters", "200", "--seed", "11")
    run_ = json.loads(out)["runs"][0]
    assert code == 0
    assert abs(run_["estimate"] - run_["dense"]) <= 0.05
    assert run_["queries_used"] == 2 * 200 * 100


def test_gap(capsys):
    code, out, _ = run(capsys, "gap", "--a", "1,10,100", "--eps", "0.1", "--sigma", "0.1")
    rows = read_csv(out)
    assert code == 0
    assert [int(r["n_star_toeplitz"]) for r in rows] == [5, 16, 50]
    assert int(rows[2]["trials_fir"]) / int(rows[0]["trials_fir"]) <= 2


# ----------------------------------------------------------------- verify

def test_verify_passes_and_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(capsys, "verify", "--out", str(a))[0] == 0
    assert run(capsys, "verify", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert len(lines) == len(verify.CHECKS)
    assert all(line.startswith("PASS") for line in lines)


def test_verify_detects_corrupted_constant():
    results = {c.name: c for c in verify.run_checks(c1=1.0)}
    assert not results["gap_bound_soundness"].passed
    assert results["widom"].passed


def test_verify_cli_nonzero_on_failure(capsys):
    code, out, _ = run(capsys, "verify", "--c1", "1.0")
    assert code == 1 and "FAIL gap_bound_soundness" in out


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "toeplitz_hinf", "norm", "--system", PAIR],
                          capture_output=True, text=True, check=True)
    assert math.isclose(json.loads(proc.stdout)["hinf_norm"], 2.0)
