"""Exact analysis of cones of quadratic forms spanned by rank-1 forms."""

from .cone import RayCone, dimension, is_basic, is_face, is_simplicial, sublattice_index
from .equiv import are_equivalent, automorphism_group
from .forms import SymForm, VectorConfig, parse_config, rank1_form, sym2_coords
from .minvec import shortest_vectors
from .realize import is_perfect_cone_config
from .voronoi2 import MatrixCone

__all__ = [
    "MatrixCone",
    "RayCone",
    "SymForm",
    "VectorConfig",
    "are_equivalent",
    "automorphism_group",
    "dimension",
    "is_basic",
    "is_face",
    "is_perfect_cone_config",
    "is_simplicial",
    "parse_config",
    "rank1_form",
    "shortest_vectors",
    "sublattice_index",
    "sym2_coords",
]

__version__ = "0.1.0"
