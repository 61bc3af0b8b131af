"""
Hermitian matrix algebra on Mat_n(C).

Eigendecomposition with eigenvalue clustering, projections and their
lattice operations, the normalized trace and the Haagerup 2/3-metric,
orthogonality and unitary equivalence. Matrices are plain dense
``numpy.ndarray`` objects; nothing here mutates its arguments.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as spl

from .errors import ClusterAmbiguity, DimensionMismatch, NotHermitian

__all__ = [
    "Tolerances",
    "SpectralDecomposition",
    "QuasitraceReport",
    "as_matrix",
    "op_norm",
    "is_hermitian",
    "check_hermitian",
    "eigendecompose",
    "normalized_trace",
    "check_quasitrace_axioms",
    "haagerup_distance",
    "is_orthogonal",
    "is_projection",
    "projection_rank",
    "support_projection",
    "join_projections",
    "amplify",
    "unitary_equiv_exact",
]


@dataclass(frozen=True)
class Tolerances:
    """
    Relative tolerances, scaled per input by ``1 + ||X||``.

    Parameters
    ----------
    hermiticity : float
        Max entrywise ``|X - X^*|`` per unit scale.
    cluster_gap : float
        Eigenvalues closer than ``cluster_gap * (1 + ||X||)`` are one cluster.
    residual : float
        Generic residual tolerance for reconstructed identities.
    trace_zero : float
        ``|tr X|`` is treated as zero below ``trace_zero * n * (1 + ||X||)``.
    """

    hermiticity: float = 1e-10
    cluster_gap: float = 1e-8
    residual: float = 1e-9
    trace_zero: float = 1e-10

    def __post_init__(self):
        for name in ("hermiticity", "cluster_gap", "residual", "trace_zero"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be strictly positive")


DEFAULT_TOL = Tolerances()


def as_matrix(X):
    """Return ``X`` as a square 2-D array (no copy when already one)."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {X.shape}")
    return X


def op_norm(X):
    """Operator (spectral) norm."""
    X = np.asarray(X)
    if X.size == 0:
        return 0.0
    if _is_diagonal(X):
        return float(np.max(np.abs(np.diag(X))))
    return float(np.linalg.norm(X, 2))


def _is_diagonal(X):
    return np.count_nonzero(X - np.diag(np.diag(X))) == 0


def is_hermitian(X, tol=DEFAULT_TOL):
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        return False
    scale = 1.0 + float(np.max(np.abs(X), initial=0.0))
    return bool(np.all(np.abs(X - X.conj().T) <= tol.hermiticity * scale))


def check_hermitian(X, tol=DEFAULT_TOL):
    """Validate and return ``X`` as a square Hermitian array."""
    X = as_matrix(X)
    if not is_hermitian(X, tol):
        err = float(np.max(np.abs(X - X.conj().T)))
        raise NotHermitian(f"matrix is not Hermitian (max |X - X*| = {err:.3e})")
    return X


def _hermitian_part(X):
    return 0.5 * (X + X.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    Clustered spectrum of a Hermitian matrix.

    ``basis[:, j]`` is an eigenvector for ``eigenvalues[j]`` (ascending), and
    ``labels[j]`` names the cluster of that column. Cluster ``i`` has value
    ``distinct_values[i]`` (the cluster mean) and ``multiplicities[i]`` columns,
    which are contiguous in ``basis``.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    labels: np.ndarray
    distinct_values: np.ndarray
    multiplicities: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def m(self):
        return len(self.distinct_values)

    def cluster_slice(self, i):
        start = int(np.sum(self.multiplicities[:i]))
        return slice(start, start + int(self.multiplicities[i]))

    def projection(self, i):
        """Spectral projection ``E_i`` onto the ``i``-th eigenspace."""
        V = self.basis[:, self.cluster_slice(i)]
        return V @ V.conj().T

    def projections(self):
        return [self.projection(i) for i in range(self.m)]

    def spectral_measure(self):
        """Scalar spectral measure as ``(alpha_i, k_i / n)`` pairs."""
        return list(zip(self.distinct_values.tolist(), (self.multiplicities / self.dim).tolist()))

    def reconstruct(self):
        V = self.basis
        return (V * self.eigenvalues) @ V.conj().T


def cluster_eigenvalues(w, gap):
    """
    Single-linkage clustering of sorted eigenvalues ``w``.

    Returns per-eigenvalue integer labels. Raises ``ClusterAmbiguity`` when a
    chain of small gaps produces a cluster wider than ``gap``: a clustering
    with the same threshold but complete linkage would then disagree.
    """
    w = np.asarray(w, dtype=float)
    if w.size == 0:
        return np.zeros(0, dtype=int)
    breaks = np.diff(w) > gap
    labels = np.concatenate([[0], np.cumsum(breaks)]).astype(int)
    for lab in range(labels[-1] + 1):
        members = w[labels == lab]
        if members[-1] - members[0] > gap:
            raise ClusterAmbiguity(
                f"cluster spread {members[-1] - members[0]:.3e} exceeds gap threshold {gap:.3e}"
            )
    return labels


def eigendecompose(X, tol=DEFAULT_TOL):
    """
    Eigendecomposition with clustered eigenvalues.

    Diagonal input is handled without calling LAPACK, so the basis is an exact
    permutation matrix (stable in the original index order for ties).

    Parameters
    ----------
    X : array_like
        Hermitian matrix.
    tol : Tolerances

    Returns
    -------
    SpectralDecomposition
    """
    X = check_hermitian(X, tol)
    n = X.shape[0]
    if _is_diagonal(X):
        d = np.real(np.diag(X)).astype(float)
        order = np.argsort(d, kind="stable")
        w = d[order]
        V = np.zeros((n, n), dtype=X.dtype if np.iscomplexobj(X) else float)
        V[order, np.arange(n)] = 1.0
    else:
        w, V = np.linalg.eigh(_hermitian_part(X))
    scale = 1.0 + float(np.max(np.abs(w)))
    labels = cluster_eigenvalues(w, tol.cluster_gap * scale)
    m = int(labels[-1]) + 1
    mult = np.bincount(labels, minlength=m)
    values = np.array([w[labels == i].mean() for i in range(m)])
    return SpectralDecomposition(
        eigenvalues=w, basis=V, labels=labels, distinct_values=values, multiplicities=mult
    )


def normalized_trace(X):
    """
    Normalized trace ``tr(X) / n``, the unique normalized quasitrace on Mat_n.

    Real (``float``) when the imaginary part is negligible, complex otherwise.
    """
    X = as_matrix(X)
    t = np.trace(X) / X.shape[0]
    if np.iscomplexobj(t):
        scale = 1.0 + float(np.max(np.abs(np.diag(X))))
        if abs(t.imag) <= 1e-14 * scale:
            return float(t.real)
        return complex(t)
    return float(t)


@dataclass
class QuasitraceReport:
    """Outcome of ``check_quasitrace_axioms``; ``violations`` holds ``(sample, axiom, residual)``."""

    n_samples: int
    violations: list = field(default_factory=list)
    checked: dict = field(default_factory=lambda: {1: 0, 2: 0, 3: 0, 4: 0})

    @property
    def passed(self):
        return not self.violations


def check_quasitrace_axioms(sample_pairs, tol=1e-10, strict=False):
    """
    Check the four quasitrace axioms for the normalized trace on samples.

    For each pair ``(A, B)`` the self-adjoint parts ``A_h, B_h`` are used for
    axioms (i) and (iii):

    1. ``q(A_h + i B_h) = q(A_h) + i q(B_h)``
    2. ``q(A A^*) = q(A^* A) >= 0`` (for both ``A`` and ``B``)
    3. ``q(A_h + B_h) = q(A_h) + q(B_h)`` when ``A_h, B_h`` commute
    4. ``q_2(diag(A, 0)) = q(A) / 2`` (normalized corner embedding)

    Residuals are compared against ``tol * (1 + ||A|| + ||B||)**2``.
    With ``strict=True`` the first failure raises ``AxiomViolation``.
    """
    from .errors import AxiomViolation

    report = QuasitraceReport(n_samples=len(sample_pairs))
    for idx, (A, B) in enumerate(sample_pairs):
        A = as_matrix(A)
        B = as_matrix(B)
        if A.shape != B.shape:
            raise DimensionMismatch(f"sample {idx}: shapes {A.shape} and {B.shape} differ")
        scale = (1.0 + op_norm(A) + op_norm(B)) ** 2
        thr = tol * scale
        Ah, Bh = _hermitian_part(A), _hermitian_part(B)
        checks = []

        lhs = complex(normalized_trace(Ah + 1j * Bh))
        rhs = complex(normalized_trace(Ah)) + 1j * complex(normalized_trace(Bh))
        checks.append((1, abs(lhs - rhs)))

        for M in (A, B):
            qa = complex(normalized_trace(M @ M.conj().T))
            qb = complex(normalized_trace(M.conj().T @ M))
            res = max(abs(qa - qb), max(0.0, -qa.real), abs(qa.imag))
            checks.append((2, res))

        if np.linalg.norm(Ah @ Bh - Bh @ Ah) <= thr:
            lhs = complex(normalized_trace(Ah + Bh))
            rhs = complex(normalized_trace(Ah)) + complex(normalized_trace(Bh))
            checks.append((3, abs(lhs - rhs)))

        corner = spl.block_diag(A, np.zeros_like(A))
        q2 = complex(normalized_trace(corner))
        checks.append((4, abs(q2 - 0.5 * complex(normalized_trace(A)))))

        for axiom, res in checks:
            report.checked[axiom] += 1
            if res > thr:
                report.violations.append((idx, axiom, float(res)))
                if strict:
                    raise AxiomViolation(axiom, f"sample {idx}: axiom ({axiom}) residual {res:.3e}")
    return report


def haagerup_distance(X, Y):
    """
    Haagerup 2/3-metric ``q((X - Y)^*(X - Y))**(1/3)`` for the normalized trace.

    Works for arbitrary (not only Hermitian) square matrices of equal size.
    """
    X = as_matrix(X)
    Y = as_matrix(Y)
    if X.shape != Y.shape:
        raise DimensionMismatch(f"shapes {X.shape} and {Y.shape} differ")
    D = X - Y
    # q(D^* D) = ||D||_F^2 / n
    val = float(np.vdot(D, D).real) / X.shape[0]
    return max(val, 0.0) ** (1.0 / 3.0)


def is_orthogonal(A, B, tol=1e-9):
    """
    ``A ⊥ B``: all of ``AB, BA, AB^*, B^*A`` vanish within ``tol * (1 + ||A|| ||B||)``.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    thr = tol * (1.0 + op_norm(A) * op_norm(B))
    Bs = B.conj().T
    return all(np.linalg.norm(P, 2) <= thr for P in (A @ B, B @ A, A @ Bs, Bs @ A))


def is_projection(P, tol=1e-9):
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        return False
    return bool(
        np.linalg.norm(P @ P - P, 2) <= tol and np.linalg.norm(P - P.conj().T, 2) <= tol
    )


def projection_rank(P):
    """``round(tr P)``; the un-normalized dimension of a projection."""
    return int(round(float(np.real(np.trace(P)))))


def support_projection(A, tol=DEFAULT_TOL):
    """
    Support (range) projection ``s(A)`` of a Hermitian matrix.

    Eigenvalues with ``|alpha| <= tol.residual * (1 + ||A||)`` count as zero.
    """
    A = check_hermitian(A, tol)
    if _is_diagonal(A):
        d = np.real(np.diag(A))
        thr = tol.residual * (1.0 + float(np.max(np.abs(d))))
        return np.diag((np.abs(d) > thr).astype(float)).astype(A.dtype if np.iscomplexobj(A) else float)
    w, V = np.linalg.eigh(_hermitian_part(A))
    thr = tol.residual * (1.0 + float(np.max(np.abs(w))))
    Vs = V[:, np.abs(w) > thr]
    return Vs @ Vs.conj().T


def join_projections(projections, tol=DEFAULT_TOL):
    """
    Supremum ``P_1 ∨ ... ∨ P_k``: the projection onto the span of all ranges.

    Computed from an orthonormal basis of the stacked ranges.
    """
    projections = [as_matrix(P) for P in projections]
    if not projections:
        raise ValueError("need at least one projection")
    shape = projections[0].shape
    for P in projections:
        if P.shape != shape:
            raise DimensionMismatch(f"shapes {shape} and {P.shape} differ")
    stacked = np.hstack(projections)
    Q = spl.orth(stacked, rcond=tol.residual)
    return Q @ Q.conj().T


def amplify(A, m):
    """``A ⊗ I_m``: the unital trace-preserving embedding Mat_n -> Mat_{nm}."""
    if int(m) != m or m < 1:
        raise ValueError("amplification factor must be a positive integer")
    A = as_matrix(A)
    return np.kron(A, np.eye(int(m), dtype=A.dtype))


def unitary_equiv_exact(A, B, tol=1e-9):
    """
    Unitary ``U`` with ``U A U^* = B``, or ``None`` when spectra differ.

    Eigenvalues are matched in sorted order; within degenerate clusters any
    matching is valid. Spectra agree when every sorted pair differs by at most
    ``tol * (1 + max(||A||, ||B||))``.
    """
    A = check_hermitian(A)
    B = check_hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    wa, Va = np.linalg.eigh(_hermitian_part(A))
    wb, Vb = np.linalg.eigh(_hermitian_part(B))
    scale = 1.0 + max(float(np.max(np.abs(wa))), float(np.max(np.abs(wb))))
    if np.max(np.abs(wa - wb)) > tol * scale:
        return None
    U = Vb @ Va.conj().T
    if np.linalg.norm(U @ A @ U.conj().T - B, 2) > tol * scale * max(1.0, np.sqrt(A.shape[0])):
        return None
    return U
