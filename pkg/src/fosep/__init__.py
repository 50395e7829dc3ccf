"""Deciding first-order separability of regular languages, with witnesses and
explicit separator synthesis, over finite and infinite words."""

from .errors import (
    EpsilonDroppedWarning,
    FormatError,
    FormulaError,
    FosepError,
    InvalidAlgebraError,
    NotSeparableError,
    RegexSyntaxError,
    ResourceLimitError,
)
from .semigroups import (
    FiniteSemigroup,
    HClassPartition,
    RecognizingMorphism,
    generate,
    h_classes,
    maximal_subgroups,
    pair_morphism,
    parse_semigroup_text,
    format_semigroup_text,
    product_semigroup,
)
from .subsets import (
    SubsetFamily,
    elements_of,
    family_contains,
    family_insert,
    family_union_of,
    mask_of,
    set_omega_closure,
    set_product,
)
from .saturation import (
    SaturationResult,
    SeparabilityVerdict,
    imprint_of_partition,
    is_fo_definable,
    is_fo_separable,
    saturate,
    saturate_family,
)
from .automata import (
    Nfa,
    complement_nfa,
    pair_to_morphism,
    parse_regex,
    regex_to_nfa,
    syntactic_semigroup,
    transition_semigroup,
)
from .fologic import (
    EfTypeTable,
    ef_classes,
    ef_equivalent,
    ef_game_equivalent,
    eval_sentence,
    format_formula,
    parse_formula,
    rank,
)
from .synthesis import (
    FoPartition,
    PartitionBlock,
    SynthesisResult,
    build_partition,
    pseudo_group_core,
    rank_bound_for,
    synthesize_separator,
    verify_separator,
)
from .omega import (
    OmegaMorphism,
    OmegaSemigroup,
    is_fo_definable_omega,
    omega_from_json,
    omega_separable,
    saturate_infinity,
    set_infinity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
