from .fincat import (
    FinCategory,
    Functor,
    Morphism,
    PushoutResult,
    CoproductResult,
    ValidationReport,
    validate_category,
    validate_functor,
    is_initial,
    find_initial,
    is_iso,
    inverse,
    is_pushout,
    pushout,
    is_coproduct,
    coproduct,
    product_category,
)
from .colimits import ColimitProvider, EnumerationColimits
from .classes import (
    MorphismClass,
    LiftingSquare,
    find_lift,
    has_llp,
    rlp_class,
    llp_class,
    is_wfs,
    WfsReport,
    HypothesisFailure,
    wfs_to_waldhausen,
    cylinder_object,
)
from .waldhausen import (
    WaldhausenStructure,
    AxiomReport,
    AxiomResult,
    verify_waldhausen,
    is_exact,
    mor_structure,
    comor_structure,
    slice_structure,
    coslice_cof_structure,
    product_structure,
)
from .backends import (
    PSetBackend,
    VectBackend,
    backend_from_spec,
    pset_category,
    vect_category,
    structure_from_spec,
    encode_morphism,
    decode_morphism,
)
from .opfib import (
    OpfibrationData,
    FactoredMorphism,
    is_cocartesian,
    fiber,
    factor,
    reindex,
    check_waldhausen_opfib,
    total_structure,
    codomain_opfib,
    domain_opfib,
    validate_opfibration,
    cleavage_coherence,
    reselect_cleavage,
    override_cleavage,
)
from .quiver import (
    Quiver,
    Arrow,
    RootedSequence,
    rooted_sequence,
    is_left_rooted,
    is_acyclic,
    subquiver,
    stage_of,
    new_vertices,
)
from .repcat import (
    Representation,
    RepMorphism,
    RepCategory,
    latching,
    rho,
    classify,
    rep_from_family,
    extract_family,
    materialize_representations,
    restriction_functor,
    restriction_opfib,
    fiber_iso,
    rep_waldhausen,
)

__all__ = [
    'FinCategory', 'Functor', 'Morphism', 'PushoutResult', 'CoproductResult', 'ValidationReport',
    'validate_category', 'validate_functor', 'is_initial', 'find_initial', 'is_iso', 'inverse',
    'is_pushout', 'pushout', 'is_coproduct', 'coproduct', 'product_category',
    'ColimitProvider', 'EnumerationColimits',
    'MorphismClass', 'LiftingSquare', 'find_lift', 'has_llp', 'rlp_class', 'llp_class',
    'is_wfs', 'WfsReport', 'HypothesisFailure', 'wfs_to_waldhausen', 'cylinder_object',
    'WaldhausenStructure', 'AxiomReport', 'AxiomResult', 'verify_waldhausen', 'is_exact',
    'mor_structure', 'comor_structure', 'slice_structure', 'coslice_cof_structure', 'product_structure',
    'PSetBackend', 'VectBackend', 'backend_from_spec', 'pset_category', 'vect_category',
    'structure_from_spec', 'encode_morphism', 'decode_morphism',
    'OpfibrationData', 'FactoredMorphism', 'is_cocartesian', 'fiber', 'factor', 'reindex',
    'check_waldhausen_opfib', 'total_structure', 'codomain_opfib', 'domain_opfib',
    'validate_opfibration', 'cleavage_coherence', 'reselect_cleavage', 'override_cleavage',
    'Quiver', 'Arrow', 'RootedSequence', 'rooted_sequence', 'is_left_rooted', 'is_acyclic',
    'subquiver', 'stage_of', 'new_vertices',
    'Representation', 'RepMorphism', 'RepCategory', 'latching', 'rho', 'classify',
    'rep_from_family', 'extract_family', 'materialize_representations', 'restriction_functor',
    'restriction_opfib', 'fiber_iso', 'rep_waldhausen',
]
