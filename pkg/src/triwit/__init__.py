"""Classification of mixed three-qubit states into the S < B < W < GHZ lattice."""

__version__ = "0.1.0"

from triwit.qcore import (
    InvalidInputError,
    NumericalError,
    Party,
    Partition,
    RankSignature,
    Tolerances,
    check_density,
    check_pure,
    eig_hermitian,
    max_subtractable_weight,
    partial_transpose,
    product_vector,
    rank_kernel,
    rank_signature,
)
from triwit.puretri import (
    GHZ,
    W,
    GhzGenParams,
    PureClass,
    PureKind,
    WGenParams,
    classify_pure,
    gen_ghz_type,
    gen_w_type,
    tangle,
    zero_tangle_mix,
)
from triwit.witness import Boundary, Witness, evaluate, projector_witness, std_witness
from triwit.overlap import OptimizerConfig, max_bisep_overlap, max_w_overlap, symmetric_w_overlap_ghz
from triwit.pptedge import (
    EdgeFamilyParams,
    edge_family,
    edge_family_bisep_decomposition,
    edge_family_is_edge,
    edge_family_kernels,
    ppt_signature,
    product_in_ranges_search,
)
from triwit.verdict import (
    ClassVerdict,
    MixedClass,
    classify_mixed,
    detection_interval,
    family_state,
    perturbed_family,
    robustness_bound,
    verify_decomposition,
    w_ball_exhibit,
)
