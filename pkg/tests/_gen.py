"""Random fixtures shared by the test modules."""

from fractions import Fraction

import numpy as np
from scipy.stats import unitary_group

from selfcomm.equiv import AssemblyTuple
from selfcomm.ii1 import SpectralElement


def random_unitary(rng, n):
    if n == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(n, random_state=rng)


def random_hermitian(rng, n, scale=1.0):
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (G + G.conj().T)


def random_traceless(rng, n):
    X = random_hermitian(rng, n)
    return X - (np.trace(X).real / n) * np.eye(n)


def random_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def with_spectrum(rng, eigenvalues):
    W = random_unitary(rng, len(eigenvalues))
    return (W * np.asarray(eigenvalues, dtype=float)) @ W.conj().T


def random_element(rng, m, traceless=False):
    alphas = np.sort(rng.uniform(-3, 3, size=m))
    while np.any(np.diff(alphas) <= 1e-6):
        alphas = np.sort(rng.uniform(-3, 3, size=m))
    w = rng.dirichlet(np.ones(m))
    w = w / w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    elem = SpectralElement(tuple(alphas), tuple(w))
    if traceless:
        elem = elem.shifted(-elem.trace)
    return elem


def random_rational_element(rng, m, L):
    """Weights k_i / L with k_i >= 1 summing to L (requires m <= L)."""
    cuts = np.sort(rng.choice(np.arange(1, L), size=m - 1, replace=False))
    k = np.diff(np.concatenate([[0], cuts, [L]]))
    alphas = np.sort(rng.uniform(-3, 3, size=m))
    w = [float(Fraction(int(ki), L)) for ki in k]
    return SpectralElement.from_atoms(zip(alphas, w)), k


def diagonal_tuple(rng, conjugate=True, sizes=None):
    """
    A valid 8-tuple built on disjoint diagonal slot blocks.

    Blocks: a1, b1 (A1 ~ B1), a2, b2 (A2 ~ B2 together with the Y part),
    y1, y2 (Y1, Y2 = -Y1 values) and s1, s2 (S1 ~ Y1, S2 ~ Y2) inside P.
    """
    k1, k2, r = sizes or (int(rng.integers(1, 4)), int(rng.integers(1, 4)), int(rng.integers(1, 4)))
    a1_vals = rng.normal(size=k1)
    b2_vals = rng.normal(size=k2)
    y_vals = rng.normal(size=r)
    blocks = {}
    pos = 0
    for name, size in (("a1", k1), ("b1", k1), ("b2", k2), ("a2", k2 + 2 * r),
                       ("y1", r), ("y2", r), ("s1", r), ("s2", r)):
        blocks[name] = np.arange(pos, pos + size)
        pos += size
    n = pos + int(rng.integers(0, 3))

    def diag(name, vals):
        d = np.zeros(n)
        d[blocks[name]] = vals
        return d

    A1 = diag("a1", a1_vals)
    B1 = diag("b1", rng.permutation(a1_vals))
    Y1 = diag("y1", y_vals)
    Y2 = diag("y2", -y_vals)
    S1 = diag("s1", rng.permutation(y_vals))
    S2 = diag("s2", -rng.permutation(y_vals))
    B2 = diag("b2", b2_vals) + Y1 + Y2
    A2 = diag("a2", rng.permutation(np.concatenate([b2_vals, y_vals, -y_vals])))
    P = np.zeros(n)
    P[np.concatenate([blocks[k] for k in ("y1", "y2", "s1", "s2")])] = 1.0

    W = random_unitary(rng, n) if conjugate else np.eye(n)

    def lift(d):
        return (W * d) @ W.conj().T

    return AssemblyTuple(*(lift(d) for d in (A1, A2, B1, B2, Y1, Y2, S1, S2, P)))


def refinement(elem, k, L, approx):
    """
    Brute-force model of the element in Mat_n ⊗ Mat_M.

    Weights are ``k_i / L``. Block slots carry ``alpha_i ⊗ I``; the ``f`` free
    slots share the leftover mass, each fiber holding ``alpha_i`` with
    multiplicity ``n k_i - c_i L`` when ``M = L f``.
    """
    n, c = approx.n, approx.counts
    f = approx.free_slots
    M = L * f if f else L
    diag = [np.full(M * ci, a) for a, ci in zip(elem.alphas, c)]
    fiber = np.repeat(elem.alpha, [n * ki - ci * L for ki, ci in zip(k, c)]) if f else np.zeros(0)
    diag += [fiber] * f
    return np.concatenate(diag), M
