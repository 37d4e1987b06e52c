"""Finite n-relative categories, their multisimplicial nerves, and executable
checks of the nerve/K adjunction, division, and enrichment constructions."""

from .errors import ResourceError, StructureError, UsageError
from .fincat import ExplicitCategory, Functor, validate_category
from .msset import MSSet, standard
from .nerve import counit, k_adjoint, nerve, unit
from .nrelcat import NRelCategory, chain_v, chain_w, make_nrelcat, satisfies_axioms, standard_nrel
from .prescat import Budget, Presentation, decide_equal, realize

__version__ = "0.1.0"

__all__ = [
    "Budget", "ExplicitCategory", "Functor", "MSSet", "NRelCategory", "Presentation",
    "ResourceError", "StructureError", "UsageError",
    "chain_v", "chain_w", "counit", "decide_equal", "k_adjoint", "make_nrelcat", "nerve",
    "realize", "satisfies_axioms", "standard", "standard_nrel", "unit", "validate_category",
]
