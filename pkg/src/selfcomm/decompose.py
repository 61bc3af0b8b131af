"""
Abelian self-commutator decompositions of traceless Hermitian matrices.

A traceless Hermitian ``X`` is split as ``X = A - B`` with ``A, B`` commuting,
unitarily equivalent, ``max(||A||, ||B||) <= ||X||`` and ``A`` orthogonal to a
prescribed rank-one projection ``P`` commuting with ``X``. The witness
``Y = (A + tI)^{1/2} U^*`` then satisfies ``YY^* - Y^*Y = X`` with
``YY^*`` and ``Y^*Y`` commuting.

The induction on the matrix size is run in a single eigenbasis of ``X``. If
``P`` and every chosen ``Q`` are coordinate projections of that basis, each
corner element ``Y = X - alpha_p (P - Q)`` stays diagonal, so a level only
updates one diagonal slot: the value on ``Q`` becomes ``alpha_q + alpha_p``
and ``Q`` is the projection handed to the next level. The chosen slots form a
chain ``p_0, p_1, ..., p_K`` and ``U`` is the cyclic permutation along it.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InternalInvariantBroken,
    NotTraceless,
    ProjectionIncompatible,
    ShiftTooSmall,
)
from .spectral import (
    DEFAULT_TOL,
    check_hermitian,
    eigendecompose,
    is_projection,
    normalized_trace,
    op_norm,
    projection_rank,
)

__all__ = [
    "Check",
    "VerificationReport",
    "Level",
    "CommutatorDecomposition",
    "Witness",
    "check_traceless",
    "decompose_with_projection",
    "decompose_traceless",
    "verify_decomposition",
    "build_witness",
    "witness_from",
    "verify_witness",
]


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def as_dict(self):
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class Level:
    """
    One step of the recursion, in working-basis slot indices.

    ``q`` and ``alpha_q`` are ``None`` at the terminal level, where the
    remaining corner is zero (up to rounding).
    """

    p: int
    alpha_p: float
    q: int | None = None
    alpha_q: float | None = None


@dataclass(frozen=True, eq=False)
class CommutatorDecomposition:
    """
    ``X = A - B`` with ``AB = BA`` and ``B = U A U^*``.

    ``basis`` is the working eigenbasis; ``a_diag`` and ``b_diag`` are the
    diagonals of ``A`` and ``B`` in it, and ``chain`` lists the slots visited.
    """

    X: np.ndarray
    A: np.ndarray
    B: np.ndarray
    U: np.ndarray
    P: np.ndarray | None
    basis: np.ndarray
    a_diag: np.ndarray
    b_diag: np.ndarray
    levels: tuple
    report: VerificationReport = field(repr=False, compare=False, default=None)

    @property
    def chain(self):
        return [lv.p for lv in self.levels]

    @property
    def basis_trace(self):
        """Slot choices ``(p, q)`` per level, for reproducibility checks."""
        return [(lv.p, lv.q) for lv in self.levels]

    @property
    def depth(self):
        return len(self.levels)


def check_traceless(X, tol=DEFAULT_TOL):
    n = X.shape[0]
    tr = float(np.real(np.trace(X)))
    thr = tol.trace_zero * n * (1.0 + op_norm(X))
    if abs(tr) > thr:
        raise NotTraceless(f"trace {tr:.6e} exceeds tolerance {thr:.3e}")
    return tr


def _run_chain(values, p, zero_thr, tie_gap):
    """
    Combinatorial recursion on diagonal slot values.

    Returns the diagonals of ``A`` and ``B``, the slot permutation ``sigma``
    (``B = diag(a)[sigma^{-1}]``) and the per-level record.
    """
    v = np.array(values, dtype=float)
    n = v.size
    active = np.ones(n, dtype=bool)
    a = np.zeros(n)
    b = np.zeros(n)
    chain = [p]
    levels = []
    while True:
        a0 = v[p]
        idx = np.flatnonzero(active)
        if np.all(np.abs(v[idx]) <= zero_thr):
            cand = np.zeros(n, dtype=bool)
        elif a0 > zero_thr:
            cand = active & (v < -zero_thr)
        elif a0 < -zero_thr:
            cand = active & (v > zero_thr)
        else:
            # alpha_p = 0: both signs admissible, negative preferred
            cand = active & (v < -zero_thr)
            if not cand.any():
                cand = active & (v > zero_thr)
        cand[p] = False
        if not cand.any():
            # corner is zero; rounding leftovers go to B so that A - B = Y exactly
            b[idx] = -v[idx]
            levels.append(Level(p=int(p), alpha_p=float(a0)))
            break
        ci = np.flatnonzero(cand)
        mags = np.abs(v[ci])
        q = int(ci[mags >= mags.max() - tie_gap].min())
        levels.append(Level(p=int(p), alpha_p=float(a0), q=q, alpha_q=float(v[q])))
        a[q] = -a0
        b[p] = -a0
        v[q] = v[q] + a0
        active[p] = False
        p = q
        chain.append(p)

    sigma = np.arange(n)
    for k in range(len(chain) - 1):
        sigma[chain[k + 1]] = chain[k]
    sigma[chain[0]] = chain[-1]
    return a, b, sigma, tuple(levels)


def _assemble(X, V, a, b, sigma, P, levels, tol):
    n = X.shape[0]
    Vh = V.conj().T
    A = (V * a) @ Vh
    B = (V * b) @ Vh
    Uw = np.zeros((n, n), dtype=V.dtype)
    Uw[sigma, np.arange(n)] = 1.0
    U = V @ Uw @ Vh
    report = verify_decomposition(X, A, B, U, P, tol)
    if not report.passed:
        raise InternalInvariantBroken(
            [(c.name, c.residual, c.tolerance) for c in report.failures()]
        )
    return CommutatorDecomposition(
        X=X, A=A, B=B, U=U, P=P, basis=V, a_diag=a, b_diag=b, levels=levels, report=report
    )


def _thresholds(X, tol):
    scale = 1.0 + op_norm(X)
    return tol.trace_zero * scale, tol.cluster_gap * scale


def decompose_with_projection(X, P, tol=DEFAULT_TOL):
    """
    Decompose traceless ``X`` as ``A - B`` with ``A ⊥ P``.

    Parameters
    ----------
    X : array_like
        Traceless Hermitian matrix.
    P : array_like
        Rank-one projection commuting with ``X``.
    tol : Tolerances

    Returns
    -------
    CommutatorDecomposition
        Verified against all five conditions before being returned.

    Raises
    ------
    NotTraceless, ProjectionIncompatible, InternalInvariantBroken
    """
    X = check_hermitian(X, tol)
    P = np.asarray(P)
    check_traceless(X, tol)
    if P.shape != X.shape:
        raise ProjectionIncompatible(f"projection shape {P.shape} does not match {X.shape}")
    if not is_projection(P, tol.residual * 10) or projection_rank(P) != 1:
        raise ProjectionIncompatible("P must be a rank-one orthogonal projection")
    scale = 1.0 + op_norm(X)
    comm = np.linalg.norm(P @ X - X @ P, 2)
    if comm > tol.residual * scale:
        raise ProjectionIncompatible(f"P does not commute with X (||PX - XP|| = {comm:.3e})")

    spec = eigendecompose(X, tol)
    V = spec.basis.astype(np.result_type(spec.basis, P), copy=True)
    w, vecs = np.linalg.eigh(0.5 * (P + P.conj().T))
    u = vecs[:, -1]

    # refine the eigenbasis inside the eigenspace containing range(P) so that
    # P becomes the first coordinate projection of that cluster
    weights = [np.linalg.norm(V[:, spec.cluster_slice(i)].conj().T @ u) for i in range(spec.m)]
    i0 = int(np.argmax(weights))
    sl = spec.cluster_slice(i0)
    Vc = V[:, sl]
    c = Vc.conj().T @ u
    c = c / np.linalg.norm(c)
    k = c.size
    Q, _ = np.linalg.qr(np.column_stack([c, np.eye(k, dtype=c.dtype)]))
    Q = Q[:, :k]
    Q[:, 0] = c
    V[:, sl] = Vc @ Q
    p = sl.start

    zero_thr, gap = _thresholds(X, tol)
    a, b, sigma, levels = _run_chain(spec.eigenvalues, p, zero_thr, gap)
    return _assemble(X, V, a, b, sigma, P, levels, tol)


def decompose_traceless(X, tol=DEFAULT_TOL, recenter=False):
    """
    Decompose a traceless Hermitian matrix into commuting equivalent halves.

    ``P`` is the first eigenvector slot of the top eigenspace. With
    ``recenter=True`` the scalar part ``(tr X / n) I`` is removed first;
    otherwise a non-negligible trace raises ``NotTraceless``.
    """
    X = check_hermitian(X, tol)
    if recenter:
        n = X.shape[0]
        X = X - (np.trace(X).real / n) * np.eye(n, dtype=X.dtype)
    check_traceless(X, tol)
    spec = eigendecompose(X, tol)
    p = spec.cluster_slice(spec.m - 1).start
    V = spec.basis
    P = np.outer(V[:, p], V[:, p].conj())
    zero_thr, gap = _thresholds(X, tol)
    a, b, sigma, levels = _run_chain(spec.eigenvalues, p, zero_thr, gap)
    return _assemble(X, V, a, b, sigma, P, levels, tol)


def verify_decomposition(X, A, B, U, P=None, tol=DEFAULT_TOL):
    """
    Re-check the five decomposition conditions from the matrices alone.

    Residuals (Frobenius norms except where noted) and tolerances, with
    ``s = 1 + ||X||``:

    - ``commute``: ``||AB - BA||`` vs ``residual * (1 + ||X||^2)``
    - ``reconstruct``: ``||A - B - X||`` vs ``residual * s``
    - ``equivalent``: ``||U A U^* - B||`` vs ``residual * s``
    - ``unitary``: ``||U^* U - I||`` vs ``residual``
    - ``norm_bound``: ``max(||A||, ||B||) - ||X||`` (operator norms) vs ``residual * s``
    - ``orthogonal_to_P``: ``||A P||`` vs ``residual * s`` (only when ``P`` given)
    """
    X = np.asarray(X)
    A = np.asarray(A)
    B = np.asarray(B)
    U = np.asarray(U)
    nx = op_norm(X)
    s = 1.0 + nx
    r = tol.residual
    n = X.shape[0]
    report = VerificationReport()
    report.checks.append(Check("commute", float(np.linalg.norm(A @ B - B @ A)), r * (1.0 + nx**2)))
    report.checks.append(Check("reconstruct", float(np.linalg.norm(A - B - X)), r * s))
    report.checks.append(
        Check("equivalent", float(np.linalg.norm(U @ A @ U.conj().T - B)), r * s)
    )
    report.checks.append(
        Check("unitary", float(np.linalg.norm(U.conj().T @ U - np.eye(n))), r)
    )
    na = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (A + A.conj().T)))))
    nb = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (B + B.conj().T)))))
    report.checks.append(Check("norm_bound", max(max(na, nb) - nx, 0.0), r * s))
    if P is not None:
        report.checks.append(Check("orthogonal_to_P", float(np.linalg.norm(A @ np.asarray(P))), r * s))
    report.info.update(norm_X=nx, norm_A=na, norm_B=nb, trace_X=normalized_trace(X))
    return report


@dataclass(frozen=True, eq=False)
class Witness:
    """``Y`` with ``YY^* - Y^*Y`` equal to the source matrix; ``t`` is the shift used."""

    Y: np.ndarray
    t: float


def witness_from(A, U, t=None, tol=DEFAULT_TOL):
    """
    ``Y = (A + tI)^{1/2} U^*``, so that ``YY^* = A + tI`` and ``Y^*Y = UAU^* + tI``.

    ``t`` defaults to ``||A||``; it must make ``A + tI`` positive semidefinite.
    """
    A = check_hermitian(A, tol)
    U = np.asarray(U)
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    if t is None:
        t = float(np.max(np.abs(w)))
    t = float(t)
    shifted = w + t
    if shifted.min() < -tol.residual * (1.0 + float(np.max(np.abs(w)))):
        raise ShiftTooSmall(f"A + tI is not positive: min eigenvalue {shifted.min():.3e} at t={t}")
    root = (V * np.sqrt(np.clip(shifted, 0.0, None))) @ V.conj().T
    return Witness(Y=root @ U.conj().T, t=t)


def build_witness(dec, t=None, tol=DEFAULT_TOL):
    """Self-commutator witness for a decomposition ``X = A - B``, ``B = UAU^*``."""
    return witness_from(dec.A, dec.U, t, tol)


def verify_witness(X, Y, tol=DEFAULT_TOL):
    """
    Check that ``Y`` certifies ``X`` as an abelian self-commutator.

    Passes iff ``||[YY^*, Y^*Y]||_F <= residual * (1 + ||X||^2)`` and
    ``||(YY^* - Y^*Y) - X||_F <= residual * (1 + ||X||)``. The normalized
    trace of ``X`` is reported in ``info``; it vanishes for any valid witness.
    """
    X = np.asarray(X)
    Y = np.asarray(Y)
    nx = op_norm(X)
    L = Y @ Y.conj().T
    R = Y.conj().T @ Y
    report = VerificationReport()
    report.checks.append(
        Check("witness_commute", float(np.linalg.norm(L @ R - R @ L)), tol.residual * (1.0 + nx**2))
    )
    report.checks.append(
        Check("witness_reconstruct", float(np.linalg.norm(L - R - X)), tol.residual * (1.0 + nx))
    )
    report.info["trace_X"] = normalized_trace(X)
    return report
