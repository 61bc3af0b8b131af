"""
Equivalence by moments and two-commutator assembly
==================================================

Two Hermitian matrices are unitarily equivalent exactly when their first n
normalized-trace moments agree. A valid 8-tuple assembles into X = X1 + X2
with each X_k an abelian self-commutator.
"""

import numpy as np

from selfcomm import (
    AssemblyTuple,
    approx_equivalent,
    assemble_pair,
    moments,
    unitary_equiv_exact,
    validate_tuple,
)

A = np.diag([1.0, 2.0, 3.0])
W = np.linalg.qr(np.random.default_rng(2).normal(size=(3, 3)))[0]
B = W @ A @ W.T
print("moments of A:", moments(A).values)
print("moment test:", approx_equivalent(A, B), " exact test:", unitary_equiv_exact(A, B) is not None)

# a small tuple on coordinate slots: a1 b1 | a2 a2 a2 b2 | y1 y2 s1 s2
def d(*vals):
    return np.diag(np.array(vals, dtype=float))

A1 = d(1, 0, 0, 0, 0, 0, 0, 0, 0, 0)
B1 = d(0, 1, 0, 0, 0, 0, 0, 0, 0, 0)
A2 = d(0, 0, 2, 3, -3, 0, 0, 0, 0, 0)
B2 = d(0, 0, 0, 0, 0, 2, 3, -3, 0, 0)
Y1 = d(0, 0, 0, 0, 0, 0, 3, 0, 0, 0)
Y2 = d(0, 0, 0, 0, 0, 0, 0, -3, 0, 0)
S1 = d(0, 0, 0, 0, 0, 0, 0, 0, 3, 0)
S2 = d(0, 0, 0, 0, 0, 0, 0, 0, 0, -3)
P = d(0, 0, 0, 0, 0, 0, 1, 1, 1, 1)
t = AssemblyTuple(A1, A2, B1, B2, Y1, Y2, S1, S2, P)

print("conditions:", validate_tuple(t).conditions)
X1, X2, X = assemble_pair(t)
print("X1 diagonal:", np.diag(X1))
print("X2 diagonal:", np.diag(X2))
print("traces:", np.trace(X1) / 10, np.trace(X2) / 10)
