"""
Splitting a traceless matrix into commuting halves
==================================================

A traceless Hermitian X is written as A - B with A and B commuting and
unitarily equivalent. The witness Y then has YY* - Y*Y = X.
"""

import numpy as np

from selfcomm import build_witness, decompose_traceless, verify_witness

# the smallest interesting case, done by hand in the test suite as well
dec = decompose_traceless(np.diag([2.0, -1.0, -1.0]))
print("A =", np.diag(dec.A))
print("B =", np.diag(dec.B))
print("slot choices per level:", dec.basis_trace)

# a random traceless Hermitian matrix
rng = np.random.default_rng(0)
G = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
X = 0.5 * (G + G.conj().T)
X -= np.trace(X).real / 6 * np.eye(6)

dec = decompose_traceless(X)
for check in dec.report.checks:
    print(f"{check.name:16s} {check.residual:.2e} <= {check.tolerance:.2e}")

# the witness Y and its check
Y = build_witness(dec).Y
print("witness passes:", verify_witness(X, Y).passed)
