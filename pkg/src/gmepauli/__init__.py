"""Genuine multipartite entanglement tests from generalized Pauli correlation tensors."""

from .correlation import (
    CorrelationTensor,
    SubsetVector,
    bound_multi,
    bound_pair,
    bound_single,
    corr_tensor,
    reconstruct,
    subset_vector,
)
from .criteria import (
    Bipartition,
    CriterionReport,
    Mode,
    NMatrix,
    PreconditionError,
    Verdict,
    bipartitions,
    bound_M,
    detect,
    n_matrix,
    s_matrix,
    score_T,
    threshold_J,
    threshold_K,
    trace_norm,
)
from .scan import Criterion, CriterionKind, ScanResult, emit_curve, scan
from .states import (
    DensityMatrix,
    MixtureSpec,
    ValidationReport,
    mix,
    partial_trace,
    purity,
    tensor,
    validate,
)
from .weyl import PauliOp, pauli_dagger_index, pauli_mul_index, pauli_op
from .zoo import FamilySpec, baselines, example2_phi, family, ghz, w3, white_noise

__version__ = "0.1.0"
