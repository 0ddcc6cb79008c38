"""Affine automorphisms, SC-invariance and automorphism-ensemble decoding of polar codes."""

from .gf2 import (
    AffineMap,
    BlockStructure,
    Gf2Matrix,
    SingularMatrixError,
    block_structure,
    blta_order,
    factored_int,
    format_factored,
    gf2_rank,
    gl_order,
    is_unit_lower,
    is_unit_upper,
    decompose_upper,
    gro,
    is_member_blta,
    lt_normalize,
    mat_inv,
    mat_mul,
    sample_blta,
)
from .monomial import (
    InfoSet,
    Monomial,
    NotDecreasingError,
    PolarCode,
    a_to_z,
    a_bits,
    bhattacharyya_bec,
    bits_to_int,
    describe_code,
    eval_monomial,
    polar_transform,
    precedes_a,
    bec_construct,
    closure_from_z,
    decreasing_closure,
    encode,
    is_decreasing,
    load_code_spec,
    precedes,
    subcode_info,
    z_to_a,
)
from .sc import (
    DecodeResult,
    NodeClass,
    OpposingInfinitiesError,
    classify_node,
    f_llr,
    f_minsum,
    g_llr,
    sc_decode,
    sc_decode_batch,
)
from .automorphism import (
    AffineAutomorphism,
    Permutation,
    apply_perm,
    automorphism_group,
    in_aut,
    is_automorphism,
    perm_from_affine,
)
from .invariance import (
    EquivClassSummary,
    InvarianceVerdict,
    NotAnAutomorphismError,
    OracleResult,
    commute_oracle,
    commute_oracle_many,
    count_classes,
    dec_aut,
    dec_group,
    equivalent,
    sample_ensemble,
    sample_automorphisms,
    sample_invariant,
    structured_probes,
    sc_invariant,
)
from .simulation import (
    MODES,
    AeOutput,
    SimConfig,
    SimReport,
    ae_decode,
    ae_decode_batch,
    awgn_llr,
    clopper_pearson,
    noise_variance,
    run_bler,
)

__version__ = "0.1.0"
