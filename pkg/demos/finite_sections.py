"""
Finite sections converge to the H-infinity norm
================================================

The n x n lower-triangular Toeplitz matrix built from an impulse response
is the truncated convolution operator.  Its largest singular value climbs
toward ||G||_inf as n grows.  For G(z) = 1 + z^-1 the climb is exactly
2 cos(pi / (2n + 1)), so the gap shrinks like 1/n^2.
"""

import numpy as np

from toeplitz_hinf import Fir, SinglePole, ToeplitzSection, hinf_norm, operator_norm_dense

pair = Fir((1.0, 1.0))
print("||G||_inf for 1 + z^-1:", hinf_norm(pair).norm)

ns = [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]
for n in ns:
    value = operator_norm_dense(ToeplitzSection([1.0, 1.0], n))
    closed = 2 * np.cos(np.pi / (2 * n + 1))
    print(f"n = {n:5d}   ||T_n|| = {value:.12f}   closed form = {closed:.12f}")

# the gap on a log-log scale
gaps = [2.0 - 2 * np.cos(np.pi / (2 * n + 1)) for n in ns]
slope = np.polyfit(np.log(ns), np.log(gaps), 1)[0]
print("fitted slope of the gap:", round(slope, 3))

# a single pole: g = (1, 1, 0.5, 0.25, ...), peak 3 at theta = 0
pole = SinglePole(0.5, 1.0, 1.0)
res = hinf_norm(pole)
print("\nsingle pole: ||G||_inf =", res.norm, "at theta0 =", res.theta0)
for n in (3, 10, 100, 1000):
    sec = ToeplitzSection.from_system(pole, n)
    print(f"n = {n:5d}   gap = {res.norm - operator_norm_dense(sec):.3e}")
