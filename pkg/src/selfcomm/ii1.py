"""
Desk-scale model of self-adjoint elements of a type II_1 factor.

An element is an atomic spectral measure ``{(alpha_i, mu_i)}``: ``alpha_i`` are
the distinct spectral values and ``mu_i = D(E_i)`` the dimensions of the
spectral projections. Quantization rounds each ``mu_i`` down to the grid
``{0, 1/n, ..., 1}``, which places the element (up to a small error in the
2/3-metric) inside a type I_n subfactor realized as n x n diagonal matrices.

Ultraproduct quantities are replaced by tail limits of finite sequences;
these are only meaningful for convergent data, which is what the
diagnostics certify.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .decompose import decompose_traceless
from .errors import EmptyInput, MismatchedProvenance, NotCauchy, NotTraceless
from .spectral import DEFAULT_TOL, haagerup_distance, op_norm

__all__ = [
    "SpectralElement",
    "DyadicApproximation",
    "ApproximationReport",
    "PipelineStep",
    "UltraSequence",
    "UltraLimit",
    "NullDifference",
    "quantize",
    "approx_error",
    "distance_to_matrix",
    "recentered_distance",
    "error_bounds",
    "approximation_report",
    "grid_counts",
    "discretize",
    "pipeline",
    "ultralimit",
    "null_difference",
    "constant_sequence",
]

WEIGHT_SUM_TOL = 1e-12
# n * mu within this of an integer is read as that integer (rational weights)
GRID_SNAP = 1e-9


@dataclass(frozen=True)
class SpectralElement:
    """Atoms ``(alpha_i, mu_i)`` with strictly increasing ``alpha`` and weights summing to 1."""

    alphas: tuple
    weights: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        weights = tuple(float(w) for w in self.weights)
        if not alphas or len(alphas) != len(weights):
            raise ValueError("need the same positive number of values and weights")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ValueError("spectral values must be strictly increasing")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {math.fsum(weights)!r}, not 1")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_atoms(cls, atoms):
        """Build from ``(alpha, mu)`` pairs in any order."""
        atoms = sorted((float(a), float(w)) for a, w in atoms)
        return cls(tuple(a for a, _ in atoms), tuple(w for _, w in atoms))

    @property
    def alpha(self):
        return np.array(self.alphas)

    @property
    def mu(self):
        return np.array(self.weights)

    @property
    def m(self):
        return len(self.alphas)

    @property
    def norm(self):
        return max(abs(a) for a in self.alphas)

    @property
    def trace(self):
        """Quasitrace ``q(X) = sum alpha_i mu_i``."""
        return math.fsum(a * w for a, w in zip(self.alphas, self.weights))

    def moment(self, k):
        return math.fsum(a**k * w for a, w in zip(self.alphas, self.weights))

    def shifted(self, c):
        return SpectralElement(tuple(a + c for a in self.alphas), self.weights)

    @property
    def atoms(self):
        return list(zip(self.alphas, self.weights))


@dataclass(frozen=True, eq=False)
class DyadicApproximation:
    """
    Quantization of ``element`` into the n x n diagonal subfactor.

    ``counts[i] = n * theta[i]`` slots carry ``alpha_i``; they are laid out as
    contiguous blocks in order of ``i``, followed by ``n - sum(counts)`` zero
    slots. ``b_diag`` is ``h_diag`` shifted by ``q(X) - beta_n``.
    """

    element: SpectralElement
    n: int
    counts: np.ndarray
    beta_n: float
    h_diag: np.ndarray = field(repr=False)
    b_diag: np.ndarray = field(repr=False)

    @property
    def theta(self):
        return self.counts / self.n

    @property
    def shift(self):
        return self.element.trace - self.beta_n

    @property
    def H(self):
        return np.diag(self.h_diag)

    @property
    def B(self):
        return np.diag(self.b_diag)

    @property
    def free_slots(self):
        return self.n - int(self.counts.sum())


def grid_counts(weights, n):
    """``floor(n * mu)`` with near-integers snapped, so exact rationals stay exact."""
    counts = []
    for w in weights:
        if isinstance(w, Fraction):
            counts.append(math.floor(n * w))
            continue
        x = n * w
        r = round(x)
        counts.append(int(r) if abs(x - r) <= GRID_SNAP else math.floor(x))
    return np.array(counts, dtype=int)


def quantize(elem, n):
    """
    Round an element down into the type I_n subfactor.

    ``theta_n(i)`` is the largest ``k/n`` not exceeding ``mu_i``; ``H_n`` carries
    ``alpha_i`` on ``n * theta_n(i)`` slots and 0 elsewhere, and
    ``B_n = H_n + (q(X) - q(H_n)) I`` has the same quasitrace as the element.
    """
    if int(n) != n or n < 2:
        raise ValueError("subfactor order n must be an integer >= 2")
    n = int(n)
    counts = grid_counts(elem.weights, n)
    h = np.zeros(n)
    h[: counts.sum()] = np.repeat(elem.alpha, counts)
    beta_n = math.fsum(a * c for a, c in zip(elem.alphas, counts.tolist())) / n
    b = h + (elem.trace - beta_n)
    return DyadicApproximation(element=elem, n=n, counts=counts, beta_n=beta_n, h_diag=h, b_diag=b)


def _check_provenance(elem, approx):
    if approx.element != elem:
        raise MismatchedProvenance("approximation was built from a different element")


def approx_error(elem, approx):
    """
    ``(|q(X) - q(H_n)|, d(X, H_n))`` in closed form.

    ``X - H_n = sum alpha_i (E_i - P_ni)`` with ``D(E_i - P_ni) = mu_i - theta_n(i)``.
    """
    _check_provenance(elem, approx)
    gaps = elem.mu - approx.theta
    dq = abs(math.fsum((elem.alpha * gaps).tolist()))
    d3 = math.fsum((elem.alpha**2 * gaps).tolist())
    return dq, max(d3, 0.0) ** (1.0 / 3.0)


def recentered_distance(elem, approx):
    """
    Closed-form ``d(X, B_n)``.

    With ``c = q(X) - q(H_n)``, ``q(|X - B_n|^2) = q(|X - H_n|^2) - c^2``, so
    recentering never increases the distance.
    """
    _check_provenance(elem, approx)
    gaps = elem.mu - approx.theta
    d3 = math.fsum((elem.alpha**2 * gaps).tolist()) - approx.shift**2
    return max(d3, 0.0) ** (1.0 / 3.0)


def distance_to_matrix(elem, approx, Y):
    """
    ``d(X, Y)`` for ``Y`` in the n x n subfactor carrying ``approx``.

    The ambient factor is modeled as ``Mat_n ⊗ C`` with ``P_ni`` the block slot
    projections and ``E_i - P_ni = R ⊗ F_i`` on the free slots ``R``. The
    conditional expectation of ``X`` onto ``Mat_n`` is then ``alpha_i`` on the
    blocks of atom ``i`` and the mean of the leftover mass on ``R``, and
    ``q(|X - Y|^2) = q(X^2) - 2 Re q(E(X) Y) + q(Y^* Y)``.
    """
    _check_provenance(elem, approx)
    Y = np.asarray(Y)
    n = approx.n
    if Y.shape != (n, n):
        raise ValueError(f"matrix shape {Y.shape} does not match subfactor order {n}")
    expect = np.zeros(n)
    used = int(approx.counts.sum())
    expect[:used] = np.repeat(elem.alpha, approx.counts)
    if approx.free_slots:
        leftover = elem.mu - approx.theta
        expect[used:] = float(np.dot(elem.alpha, leftover)) / leftover.sum()
    qx2 = elem.moment(2)
    cross = float(np.dot(expect, np.real(np.diag(Y)))) / n
    qy2 = float(np.vdot(Y, Y).real) / n
    return max(qx2 - 2.0 * cross + qy2, 0.0) ** (1.0 / 3.0)


def discretize(samples, m):
    """
    Finite-spectrum approximation of an empirical distribution.

    Sorted samples are split into ``m`` contiguous bins of (near) equal size;
    each bin becomes an atom at its mean with weight ``size / N``. Bins with
    equal means merge. The result is shifted so its quasitrace equals the
    sample mean exactly.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise EmptyInput("no samples to discretize")
    if int(m) != m or m < 1:
        raise ValueError("atom count m must be a positive integer")
    bins = [b for b in np.array_split(x, min(int(m), x.size)) if b.size]
    atoms = {}
    for b in bins:
        key = float(b.mean())
        atoms[key] = atoms.get(key, 0) + b.size
    alphas = sorted(atoms)
    weights = [atoms[a] / x.size for a in alphas]
    elem = SpectralElement(tuple(alphas), tuple(weights))
    return elem.shifted(float(x.mean()) - elem.trace)


@dataclass(frozen=True)
class ApproximationReport:
    """
    Per-n errors and bounds.

    ``d`` is the closed-form ``d(X, H_n)``; ``d_output`` is ``d(X, A_n - B_n)``
    for the decomposition output when one was computed.
    """

    n: int
    delta_q: float
    d: float
    bound_q: float
    bound_d: float
    max_norm: float
    norm_budget: float
    d_output: float = float("nan")
    decomposition_pass: bool = True

    @property
    def norm_margin(self):
        return self.max_norm - self.norm_budget

    @property
    def passed(self):
        ok = self.delta_q <= self.bound_q and self.d <= self.bound_d
        ok = ok and self.norm_margin <= 0 and self.decomposition_pass
        if not math.isnan(self.d_output):
            ok = ok and self.d_output <= self.bound_d
        return ok


def error_bounds(elem, n):
    """``(m ||X|| / n, (m ||X||^2 / n)^(1/3))``."""
    m, x = elem.m, elem.norm
    return m * x / n, (m * x * x / n) ** (1.0 / 3.0)


def approximation_report(elem, approx, dec=None, tol=DEFAULT_TOL):
    dq, d = approx_error(elem, approx)
    bq, bd = error_bounds(elem, approx.n)
    budget = elem.norm + bq + 1.0 / approx.n
    if dec is None:
        return ApproximationReport(
            n=approx.n, delta_q=dq, d=d, bound_q=bq, bound_d=bd,
            max_norm=float(np.max(np.abs(approx.b_diag))), norm_budget=budget,
        )
    max_norm = max(dec.report.info["norm_A"], dec.report.info["norm_B"])
    d_out = distance_to_matrix(elem, approx, dec.A - dec.B)
    return ApproximationReport(
        n=approx.n, delta_q=dq, d=d, bound_q=bq, bound_d=bd,
        max_norm=max_norm, norm_budget=budget, d_output=d_out,
        decomposition_pass=dec.report.passed,
    )


@dataclass(frozen=True, eq=False)
class PipelineStep:
    n: int
    approx: DyadicApproximation
    decomposition: object
    report: ApproximationReport


def pipeline(elem, schedule, tol=DEFAULT_TOL, trace_tol=1e-12):
    """
    Quantize a traceless element at each ``n`` and decompose ``B_n``.

    For each scheduled ``n``: build ``B_n`` (traceless since ``q(X) = 0``),
    split it as ``A_n - B_n`` with the matrix decomposition and report the
    quantization errors, the distance from the element to ``A_n - B_n`` and
    the norms against ``||X|| + m||X||/n + 1/n``.
    """
    if abs(elem.trace) > trace_tol:
        raise NotTraceless(f"element has quasitrace {elem.trace:.3e}")
    steps = []
    for n in schedule:
        if n < 2:
            raise ValueError("schedule entries must be >= 2")
        approx = quantize(elem, n)
        dec = decompose_traceless(approx.B, tol)
        steps.append(PipelineStep(n=int(n), approx=approx, decomposition=dec,
                                  report=approximation_report(elem, approx, dec, tol)))
    return steps


@dataclass(frozen=True, eq=False)
class UltraSequence:
    """Finite truncation of a bounded sequence; the last ``tail_window`` terms estimate limits."""

    terms: tuple
    tail_window: int

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not 2 <= self.tail_window <= len(self.terms):
            raise ValueError("tail_window must satisfy 2 <= tail_window <= len(terms)")

    @property
    def tail(self):
        return self.terms[-self.tail_window:]


@dataclass(frozen=True)
class UltraLimit:
    value: float
    oscillation: float
    converged: bool


def ultralimit(seq, tol=1e-6, strict=False):
    """
    Tail-window surrogate for ``lim_U``.

    Returns the tail mean and the tail oscillation ``max - min``. The estimate
    is certified (``converged``) only when the oscillation is within ``tol``;
    otherwise it is still returned, or ``NotCauchy`` is raised if ``strict``.
    """
    tail = np.asarray(seq.tail, dtype=float)
    osc = float(tail.max() - tail.min())
    result = UltraLimit(value=float(tail.mean()), oscillation=osc, converged=osc <= tol)
    if strict and not result.converged:
        raise NotCauchy(f"tail oscillation {osc:.3e} exceeds {tol:.3e}")
    return result


@dataclass(frozen=True)
class NullDifference:
    """``null`` is True when the tail distances converge to 0 within tolerance."""

    null: bool
    distance: UltraLimit
    norm_x: UltraLimit
    norm_y: UltraLimit

    def __bool__(self):
        return self.null


def null_difference(x_seq, y_seq, tol=1e-6):
    """
    Whether two bounded sequences define the same ultraproduct element.

    Uses the tail of ``d(X_n, Y_n)``. The tail limits of ``||X_n||`` and
    ``||Y_n||`` are reported as upper bounds for the norms of the classes.
    """
    if len(x_seq.terms) != len(y_seq.terms):
        raise ValueError("sequences have different lengths")
    w = min(x_seq.tail_window, y_seq.tail_window)
    dists = [haagerup_distance(X, Y) for X, Y in zip(x_seq.terms, y_seq.terms)]
    dist = ultralimit(UltraSequence(dists, w), tol)
    nx = ultralimit(UltraSequence([op_norm(X) for X in x_seq.terms], w), tol)
    ny = ultralimit(UltraSequence([op_norm(Y) for Y in y_seq.terms], w), tol)
    null = dist.converged and abs(dist.value) <= tol
    return NullDifference(null=null, distance=dist, norm_x=nx, norm_y=ny)


def constant_sequence(X, length, tail_window=None):
    """Diagonal embedding: the constant sequence ``(X, X, ...)``."""
    return UltraSequence((np.asarray(X),) * length, tail_window or min(length, 4))
