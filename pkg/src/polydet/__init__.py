"""Exact determinants of multivariate integer polynomial matrices.

The pipeline evaluates every matrix entry on a root-of-unity grid over
several word-size prime fields, takes pointwise numeric determinants,
interpolates back to coefficient tensors, and reconstructs the exact
signed integer coefficients by mixed-radix remaindering. All stages
are exact; no floating point is involved anywhere.
"""

from .crt import CrtBasis, build_basis, combine_tensor, horner_lift, mrc_digits, signed_lift
from .determinant import ModMatrix, PivotRecord, condense, det_grid, det_mod
from .errors import (
    CorruptWorkspaceError,
    ParseError,
    PlanningError,
    PolydetError,
    StaleWorkspaceError,
    WorkspaceError,
)
from .modular import (
    CensusResult,
    PrimeSpec,
    add_mod,
    census,
    find_fourier_primes,
    find_root_of_order,
    inv_mod,
    is_prime,
    mul_mod,
    pow_mod,
    sub_mod,
)
from .parsing import (
    format_matrix_document,
    format_polynomial,
    parse_matrix_document,
    parse_pair_document,
    parse_polynomial,
)
from .pipeline import (
    PipelineConfig,
    Plan,
    Prediction,
    StageTimings,
    coefficient_bound,
    degree_bound,
    plan,
    predict,
    predicted_total,
    resume,
    resume_report,
    run,
    run_report,
)
from .resultant import sylvester
from .tensor import (
    CoeffTensor,
    DegreeVector,
    ModTensor,
    PolyMatrix,
    axis_rotate,
    encode,
    normalize_terms,
    pad_shape,
    pad_to,
    poly_matrix,
    reduce_mod,
    tensor_from_terms,
)
from .transform import (
    TwiddleTable,
    ntt_forward_1d,
    ntt_forward_multi,
    ntt_inverse_1d,
    ntt_inverse_multi,
)

__version__ = "0.1.0"
