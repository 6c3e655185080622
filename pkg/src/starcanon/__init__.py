"""Graph canonical labeling and automorphism group order by refinement, search and star decomposition."""

from .graph import (CanonicalForm, Graph, apply, cherry, gen_erdos_renyi, gen_regular_tournament,
                    gen_star, matrix_compare)
from .search import SearchStats, SearchTimeout, canonicalize

__all__ = ["CanonicalForm", "Graph", "SearchStats", "SearchTimeout", "apply", "canonicalize", "cherry",
           "gen_erdos_renyi", "gen_regular_tournament", "gen_star", "matrix_compare"]
