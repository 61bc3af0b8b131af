"""
Abelian self-commutator decompositions of traceless Hermitian matrices,
with a desk-scale model of the type II_1 approximation argument.
"""

from .decompose import (
    CommutatorDecomposition,
    Witness,
    build_witness,
    decompose_traceless,
    decompose_with_projection,
    verify_decomposition,
    verify_witness,
)
from .equiv import AssemblyTuple, approx_equivalent, assemble_pair, embed_2x2, moments, validate_tuple
from .errors import *  # noqa: F401,F403
from .ii1 import (
    SpectralElement,
    UltraSequence,
    approx_error,
    discretize,
    distance_to_matrix,
    error_bounds,
    null_difference,
    pipeline,
    quantize,
    recentered_distance,
    ultralimit,
)
from .spectral import (
    Tolerances,
    amplify,
    check_quasitrace_axioms,
    eigendecompose,
    haagerup_distance,
    is_orthogonal,
    join_projections,
    normalized_trace,
    support_projection,
    unitary_equiv_exact,
)

__version__ = "0.1.0"
