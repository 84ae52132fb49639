"""quandlekit: finite quandles, their profiles, and super Hayashi structure.

A quandle is a set with a binary operation * whose right translations
R_y: x -> x*y are automorphisms fixing their own index.  This package
validates operation tables, computes cycle-structure profiles, detects and
verifies super Hayashi quandles, builds infinite families of them, and
exhaustively searches small orders for quandles with a prescribed profile.
"""

from .construct import (
    EmbeddingReport,
    GaloisField,
    PrimitiveRootResult,
    affine_quandle,
    family_embedding,
    galois_affine_quandle,
    primitive_root,
    shq_family,
)
from .core import (
    CycleStructure,
    Permutation,
    QuandleTable,
    ValidationResult,
    cycle_structure,
    format_qdl,
    from_translations,
    parse_qdl,
    read_qdl,
    right_translation,
    translations,
    validate_quandle,
    write_qdl,
)
from .errors import (
    ConjugationViolation,
    DegenerateMultiplier,
    FixedPointMissing,
    IndexOutOfRange,
    InvalidQuandleError,
    MultiplierNotInvertible,
    NotAPartition,
    NotCanonicalForm,
    NotOddPrime,
    NotRelabelable,
    NotSHQShape,
    ParamOutOfRange,
    ParseError,
    ProfileInconsistency,
    QuandleKitError,
    RepeatedLengthsUnsupported,
    SizeLimitExceeded,
)
from .search import (
    SearchResult,
    SearchSpec,
    SearchStats,
    naive_connected_quandles,
    prune_report,
    save_search_result,
    search_by_profile,
)
from .shq import (
    Admissibility,
    CanonicalDecomposition,
    ConjugationCheck,
    FixBlockPartition,
    FixBlockReport,
    LcmCheck,
    MainTheoremReport,
    ShqParams,
    canonical_relabel,
    check_conjugation_relations,
    check_lcm_divisibility,
    check_profile_admissible,
    classify_shq,
    decomposition_of,
    fix_block_report,
    fix_blocks,
    predicted_profile,
    shq_lengths,
    verify_main_theorem,
)
from .structure import (
    Profile,
    SubquandleEntry,
    SubquandleInventory,
    are_isomorphic,
    enumerate_subquandles,
    is_connected,
    is_latin,
    orbits,
    profile,
    subquandle_closure,
    subtable,
)

__version__ = "0.1.0"
