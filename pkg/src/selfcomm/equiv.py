"""
Approximate unitary equivalence by moments, and the two-commutator assembly.

For Hermitian matrices ``A1 ~ A2`` means ``q(A1^k) = q(A2^k)`` for all ``k``;
with ``k`` up to the dimension this is equality of spectra (Newton's
identities). ``assemble_pair`` combines a valid 8-tuple into two commuting
abelian approximate self-commutators ``X1, X2`` with ``X1 + X2 = X``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidTuple
from .spectral import (
    DEFAULT_TOL,
    as_matrix,
    check_hermitian,
    is_orthogonal,
    normalized_trace,
    op_norm,
    support_projection,
)

__all__ = [
    "MomentVector",
    "AssemblyTuple",
    "TupleReport",
    "AssembledPair",
    "moments",
    "approx_equivalent",
    "validate_tuple",
    "assemble_pair",
    "embed_2x2",
    "support_below",
    "dimension",
]


@dataclass(frozen=True, eq=False)
class MomentVector:
    """``values[k - 1] = q(A^k)`` for ``k = 1..K``."""

    K: int
    values: np.ndarray
    norm: float = 0.0

    def __getitem__(self, k):
        return self.values[k - 1]


def moments(A, K=None):
    """Normalized-trace moments ``q(A^k)``, ``k = 1..K``, from the eigenvalues."""
    A = check_hermitian(A)
    K = A.shape[0] if K is None else int(K)
    if K < 1:
        raise ValueError("K must be >= 1")
    w = np.linalg.eigvalsh(0.5 * (A + A.conj().T))
    powers = np.cumprod(np.tile(w, (K, 1)), axis=0)
    return MomentVector(K=K, values=powers.mean(axis=1), norm=float(np.max(np.abs(w))))


def approx_equivalent(A1, A2, K=None, tol=1e-9):
    """
    ``A1 ~ A2``: ``|q(A1^k) - q(A2^k)| <= tol * max(1, ||A||)^k`` for ``k <= K``.

    ``K`` defaults to the dimension, and ``||A||`` is the larger of the two norms.
    """
    A1 = as_matrix(A1)
    A2 = as_matrix(A2)
    if A1.shape != A2.shape:
        raise DimensionMismatch(f"shapes {A1.shape} and {A2.shape} differ")
    m1 = moments(A1, K)
    m2 = moments(A2, K)
    scale = max(1.0, m1.norm, m2.norm)
    thr = tol * scale ** np.arange(1, m1.K + 1)
    return bool(np.all(np.abs(m1.values - m2.values) <= thr))


def _odd_moments_vanish(S, tol):
    mv = moments(S)
    scale = max(1.0, mv.norm)
    k = np.arange(1, mv.K + 1)
    odd = k % 2 == 1
    return bool(np.all(np.abs(mv.values[odd]) <= tol * scale ** k[odd]))


@dataclass(frozen=True, eq=False)
class AssemblyTuple:
    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    P: np.ndarray

    NAMES = ("A1", "A2", "B1", "B2", "Y1", "Y2", "S1", "S2")

    def matrices(self):
        return [getattr(self, k) for k in self.NAMES]

    @property
    def X(self):
        return self.A1 - self.B1 + self.A2 - self.B2 + self.Y1 + self.Y2


@dataclass
class TupleReport:
    """Per-condition verdicts (keys ``"i"`` .. ``"vi"``) and worst residuals."""

    conditions: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.conditions.values())

    def failed(self):
        return [k for k, ok in self.conditions.items() if not ok]


def validate_tuple(t, tol=1e-9, X=None):
    """
    Check conditions (i)-(vi) on an assembly tuple.

    (i) all eight commute; (ii) ``A1~B1, A2~B2, Y1~S1, Y2~S2`` and
    ``S1+S2 ~ -(S1+S2)``; (iii) ``A1 ⊥ A2, B1, P``; ``A2 ⊥ B2, P``;
    ``B1 ⊥ B2, P``; ``B2 P = P B2 = Y1 + Y2``; (iv) ``Y1, Y2 ⊥ S1, S2``;
    (v) ``Y1, Y2, S1, S2`` live in the corner ``P(.)P``; (vi) ``X`` (when
    given) equals ``A1 - B1 + A2 - B2 + Y1 + Y2``.
    """
    mats = t.matrices()
    shape = mats[0].shape
    for M in mats + [t.P]:
        if np.asarray(M).shape != shape:
            raise DimensionMismatch("tuple members have different shapes")
    scale = 1.0 + max(op_norm(M) for M in mats)
    thr = tol * scale * scale
    rep = TupleReport()

    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = max(worst, float(np.linalg.norm(mats[i] @ mats[j] - mats[j] @ mats[i])))
    rep.residuals["i"] = worst
    rep.conditions["i"] = worst <= thr

    S = t.S1 + t.S2
    rep.conditions["ii"] = (
        approx_equivalent(t.A1, t.B1, tol=tol)
        and approx_equivalent(t.A2, t.B2, tol=tol)
        and approx_equivalent(t.Y1, t.S1, tol=tol)
        and approx_equivalent(t.Y2, t.S2, tol=tol)
        and _odd_moments_vanish(S, tol)
    )

    orth = [(t.A1, t.A2), (t.A1, t.B1), (t.A1, t.P), (t.A2, t.B2), (t.A2, t.P),
            (t.B1, t.B2), (t.B1, t.P)]
    corner = t.Y1 + t.Y2
    r3 = max(float(np.linalg.norm(t.B2 @ t.P - corner)), float(np.linalg.norm(t.P @ t.B2 - corner)))
    rep.residuals["iii"] = r3
    rep.conditions["iii"] = all(is_orthogonal(a, b, tol) for a, b in orth) and r3 <= thr

    rep.conditions["iv"] = all(is_orthogonal(y, s, tol) for y in (t.Y1, t.Y2) for s in (t.S1, t.S2))

    r5 = max(float(np.linalg.norm(M - t.P @ M @ t.P)) for M in (t.Y1, t.Y2, t.S1, t.S2))
    rep.residuals["v"] = r5
    rep.conditions["v"] = r5 <= thr

    if X is None:
        rep.conditions["vi"] = True
        rep.residuals["vi"] = 0.0
    else:
        r6 = float(np.linalg.norm(np.asarray(X) - t.X))
        rep.residuals["vi"] = r6
        rep.conditions["vi"] = r6 <= tol * scale
    return rep


@dataclass(frozen=True, eq=False)
class AssembledPair:
    X1: np.ndarray
    X2: np.ndarray
    X: np.ndarray
    V1: np.ndarray
    W1: np.ndarray
    V2: np.ndarray
    W2: np.ndarray

    def __iter__(self):
        return iter((self.X1, self.X2, self.X))


def assemble_pair(t, tol=1e-9, X=None):
    """
    Two commuting abelian approximate self-commutators from a valid tuple.

    ``V1 = A1 + Y1 - S2``, ``W1 = B1 + S1 - Y2``, ``V2 = A2 + (S1 + S2)/2``,
    ``W2 = B2 - (S1 + S2)/2``; returns ``X1 = V1 - W1``, ``X2 = V2 - W2`` and
    their sum ``X``. Unpacks as ``X1, X2, X``.
    """
    rep = validate_tuple(t, tol, X)
    if not rep.passed:
        raise InvalidTuple(rep.failed())
    half = 0.5 * (t.S1 + t.S2)
    V1 = t.A1 + t.Y1 - t.S2
    W1 = t.B1 + t.S1 - t.Y2
    V2 = t.A2 + half
    W2 = t.B2 - half
    X1 = V1 - W1
    X2 = V2 - W2
    return AssembledPair(X1=X1, X2=X2, X=X1 + X2, V1=V1, W1=W1, V2=V2, W2=W2)


def embed_2x2(X):
    """
    ``X ↦ [[X, 0], [0, 0]]`` in Mat_2(Mat_n), with ``E = [[I, 0], [0, 0]]``.

    ``q(X~) = q(X) / 2`` and ``D(E) = 1/2``; the support of ``X~`` lies under ``E``.
    """
    X = as_matrix(X)
    n = X.shape[0]
    Xt = np.zeros((2 * n, 2 * n), dtype=X.dtype)
    Xt[:n, :n] = X
    E = np.zeros((2 * n, 2 * n))
    E[:n, :n] = np.eye(n)
    return Xt, E


def support_below(X, E, tol=DEFAULT_TOL):
    """Residual ``||s(X) E - s(X)||``; zero iff ``s(X) <= E``."""
    S = support_projection(X, tol)
    return float(np.linalg.norm(S @ E - S))


def dimension(P):
    """``D(P) = q(P)``."""
    return normalized_trace(P)
