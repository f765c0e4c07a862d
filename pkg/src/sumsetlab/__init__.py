"""Exact sumset computation and small-subset saturation experiments."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .groups import CyclicMod, IntegerLattice, PrimeProduct, VectorSpace, ctx_from_descriptor
from .sets import (GSet, F2, Z, Zmod, difference_set, doubling_kappa, iterated_sumset, kappa_ab,
                   neg_set, read_set, sumset, translate, write_set)
from .saturator import (brute_min_subset, find_triple, greedy_diff_saturate, greedy_pair_saturate,
                        greedy_self_saturate, medium_saturate, saturating_cover,
                        select_full_dim_subset)
from .verifier import (harper_check, hamming_neighborhood, hyperplane_cover_check, min_walks,
                       nonsaturation_ratio, plunnecke_check, theorem_bound_check,
                       unique_doubling_check, walk_bound_certificate)
from .constructions import build

__all__ = [
    "CyclicMod", "IntegerLattice", "PrimeProduct", "VectorSpace", "ctx_from_descriptor",
    "GSet", "F2", "Z", "Zmod", "difference_set", "doubling_kappa", "iterated_sumset", "kappa_ab",
    "neg_set", "read_set", "sumset", "translate", "write_set",
    "brute_min_subset", "find_triple", "greedy_diff_saturate", "greedy_pair_saturate",
    "greedy_self_saturate", "medium_saturate", "saturating_cover", "select_full_dim_subset",
    "harper_check", "hamming_neighborhood", "hyperplane_cover_check", "min_walks",
    "nonsaturation_ratio", "plunnecke_check", "theorem_bound_check", "unique_doubling_check",
    "walk_bound_certificate", "build",
]
