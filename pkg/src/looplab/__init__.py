"""looplab: exact factorization of matrix-group elements over truncated
Laurent series on Artinian local coefficient rings, with independently
verifiable certificates."""

from .bigcell import (
    BigCellFactors,
    ldu_decompose,
    leading_minors,
    translate_candidates,
    translate_to_big_cell,
)
from .errors import (
    ConstraintViolation,
    ContextMismatch,
    IndeterminatePrecision,
    InternalConsistencyError,
    LoopLabError,
    NotAUnit,
    NotInBigCell,
    ParseError,
    SchemaError,
)
from .factorization import (
    GROUP_RES_SL2,
    FactorizationCertificate,
    VerificationReport,
    certificate_from_document,
    check_membership,
    factor_loop_element,
    factor_res_sl2_torus,
    factor_sl2_torus,
    factor_su3_torus_artinian,
    lift_factorization,
    make_certificate,
    squarezero_target,
    su3_a_factor,
    su3_b_factor,
    su3_n_factor,
    su3_squarezero_torus_factor,
    verify_certificate,
)
from .groups import (
    GROUP_SL2,
    GROUP_SL3,
    GROUP_SU3,
    TAG_GENERIC,
    TAG_TORUS,
    TAG_UMINUS,
    TAG_UPLUS,
    GroupElement,
    identity,
    mat_det,
    mat_inv,
    mat_mul,
    mat_word,
    sl2_generators,
    sl2_torus,
    sl2_uminus,
    sl2_uplus,
    sl2_weyl,
    sl3_coroot,
    sl3_diag,
    sl3_elementary,
    su3_a,
    su3_check,
    su3_n,
    su3_named,
    su3_torus,
    su3_u_minus,
    su3_u_plus,
)
from .rings import (
    DEFAULT_PRECISION,
    INDETERMINATE,
    NONUNIT,
    UNIT,
    AlgElement,
    ArtinLocalAlgebra,
    BaseField,
    LaurentSeries,
    QuadExtElement,
    QuotientMap,
    SquareZeroChain,
    alg_make,
    invert_series,
    is_unit_series,
    quad_ops,
    reduce_series,
    series_arith,
    square_zero_filtration,
)
from .rootdatum import (
    BasedRootDatum,
    DiagramAutomorphism,
    OrbitClassification,
    all_automorphisms,
    classify_orbits,
    datum_make,
    is_simply_connected,
    named_automorphism,
    split_torus_factor_plan,
)
