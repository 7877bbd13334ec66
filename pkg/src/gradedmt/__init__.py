"""First-order graded model theory over finite UL-chains, decided by exhaustive search."""

from .algebra import (
    AxiomReport,
    UlChain,
    builtin_chain,
    chain_embeddings,
    find_embedding,
    make_godel_chain,
    make_lukasiewicz_chain,
    make_truncated_group_chain,
    power,
    residuum,
    verify_ul_axioms,
)
from .errors import (
    AxiomViolation,
    BoundsExhausted,
    ConstantsExhausted,
    EnumerationTooLarge,
    FileFormatError,
    FormulaSyntaxError,
    GradedError,
    InconsistentInput,
    InvalidElement,
    InvalidSize,
    NotAChain,
    NotASentence,
    NotAType,
    SearchSpaceTooLarge,
    SignatureMismatch,
    UncoveredVariable,
)
from .modeltheory import (
    ModelChain,
    check_elementary,
    check_substructure,
    check_union_preservation,
    eldiag,
    is_elementary_substructure,
    is_exhaustive,
    is_substructure,
    theory_of,
    union_of_chain,
)
from .semantics import (
    SearchSpace,
    Structure,
    entails,
    enumerate_structures,
    eval_formula,
    eval_term,
    find_countermodel,
    is_model_of,
)
from .syntax import (
    Signature,
    enumerate_formulas,
    free_variables,
    parse_formula,
    substitute,
    to_text,
)
from .tableaux import (
    Tableau,
    check_finite_character,
    find_satisfying_model,
    henkin_complete,
    is_consistent,
    satisfies_tableau,
)
from .types import (
    TypePair,
    find_realizer,
    is_saturated,
    is_type_of_tableau,
    realized_type,
    saturate_step,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "UlChain",
    "builtin_chain",
    "chain_embeddings",
    "find_embedding",
    "make_godel_chain",
    "make_lukasiewicz_chain",
    "make_truncated_group_chain",
    "power",
    "residuum",
    "verify_ul_axioms",
    "AxiomViolation",
    "BoundsExhausted",
    "ConstantsExhausted",
    "EnumerationTooLarge",
    "FileFormatError",
    "FormulaSyntaxError",
    "GradedError",
    "InconsistentInput",
    "InvalidElement",
    "InvalidSize",
    "NotAChain",
    "NotASentence",
    "NotAType",
    "SearchSpaceTooLarge",
    "SignatureMismatch",
    "UncoveredVariable",
    "ModelChain",
    "check_elementary",
    "check_substructure",
    "check_union_preservation",
    "eldiag",
    "is_elementary_substructure",
    "is_exhaustive",
    "is_substructure",
    "theory_of",
    "union_of_chain",
    "SearchSpace",
    "Structure",
    "entails",
    "enumerate_structures",
    "eval_formula",
    "eval_term",
    "find_countermodel",
    "is_model_of",
    "Signature",
    "enumerate_formulas",
    "free_variables",
    "parse_formula",
    "substitute",
    "to_text",
    "Tableau",
    "check_finite_character",
    "find_satisfying_model",
    "henkin_complete",
    "is_consistent",
    "satisfies_tableau",
    "TypePair",
    "find_realizer",
    "is_saturated",
    "is_type_of_tableau",
    "realized_type",
    "saturate_step",
]
