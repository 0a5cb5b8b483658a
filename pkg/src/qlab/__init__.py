"""Commuting complexes of symmetric groups and their integral homology."""

from .errors import BudgetExceeded, ParameterError, QlabError
from .graphs import UNBOUNDED, build_commuting_graph, build_kneser_graph
from .homology import HomologyGroup, complex_homology
from .perm import GroundSet, Injection, Permutation
from .simplicial import boundary_matrix, clique_complex
from .snf import smith_normal_form
from .sparse import SparseIntMatrix

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "GroundSet",
    "HomologyGroup",
    "Injection",
    "ParameterError",
    "Permutation",
    "QlabError",
    "SparseIntMatrix",
    "UNBOUNDED",
    "boundary_matrix",
    "build_commuting_graph",
    "build_kneser_graph",
    "clique_complex",
    "complex_homology",
    "smith_normal_form",
]
