"""
Estimating the norm through experiments only
=============================================

The power method on T_n^T T_n needs two products per sweep.  The forward
product is one experiment on the system.  The adjoint is the experiment on
the time-reversed signal, reversed again.  With measurement noise every
product is averaged over repeated experiments.
"""

from toeplitz_hinf import (
    Fir,
    QueryOracle,
    ToeplitzSection,
    operator_norm_dense,
    operator_norm_power,
    wahlberg_power_method,
)

n = 64
sec = ToeplitzSection([1.0, 1.0], n)
dense = operator_norm_dense(sec)

# noiseless: the oracle path is exactly the matvec path
direct = operator_norm_power(sec, tol=1e-13, seed=3)
trace = wahlberg_power_method(QueryOracle(Fir((1.0, 1.0)), n), 100_000, tol=1e-13, seed=3)
print("dense:", dense)
print("power (matvec):", direct.value, "in", direct.iterations, "sweeps")
print("power (oracle):", trace.final.value, "using", trace.queries_used, "experiments")

# noisy: sigma = 0.01, each product averaged over 100 experiments
noisy = wahlberg_power_method(QueryOracle(Fir((1.0, 1.0)), n, 0.01, 11), 200, repeats=100, seed=11)
print("\nnoisy estimate:", noisy.final.value)
print("experiments:", noisy.queries_used, " samples:", noisy.samples_used)
print("first sweeps:", [round(v, 4) for v in noisy.estimates[:5]])
