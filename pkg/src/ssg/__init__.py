"""Decide simplicity of algebras of contracting self-similar groups from their nucleus."""

from .errors import (
    CapacityExceeded,
    DanglingRestriction,
    DslSyntaxError,
    DuplicateBisimilarStates,
    InternalInconsistency,
    NoIdentity,
    NotAPermutation,
    NotContractedWithinBound,
    PresentationError,
)
from .presentation import (
    NucleusAutomaton,
    act_letter,
    act_word,
    bisimilar,
    identify_in_nucleus,
    nucleus_closure,
    parse_presentation,
    serialize,
)
from .structure import build_delta, build_strongfix, is_hausdorff, maximal_cyclic_subgroups, strong_fix_set
from .verdict import decide_simplicity, verdict_to_json

__version__ = "0.1.0"
