"""Operator k-norms of bipartite states and the geometry of Schmidt number witnesses."""

from .families import FamilySpec, build
from .geometry import (
    BetaThresholds,
    DegenerateFamilyError,
    FaceLocation,
    WitnessClass,
    beta_thresholds,
    classify_witness,
    entanglement_order,
    face_outside,
    is_k_blockpositive,
    is_k_entangled,
    opposite_face_data,
    theorem31_check,
    witness_from_state,
    witnesses_outside_face,
    x_lambda,
)
from .knorm import (
    KNormResult,
    SolverConfig,
    brute_force_knorm,
    knorm,
    knorm_profile,
    min_knorm,
    rank_k_overlap,
    subspace_max_tau,
)
from .linalg import (
    BipartiteDim,
    HermitianOp,
    PureVector,
    SchmidtData,
    State,
    Subspace,
    hermitian_spectrum,
    hs_inner,
    partial_transpose,
    psd_sqrt,
    reshape_to_matrix,
    schmidt_decompose,
    tau_k,
)

__version__ = "0.1.0"
