"""Exact Graev (ultra)norms on free groups, amalgamated free products and HNN extensions of finite groups."""

from .amalgam import AmalgamSetup, ProductElem, build_multi_setup, build_setup, subgroup_as_group
from .forest import EvaluationForest, build_maximal_forest, check_forest, check_maximal, enumerate_maximal_forests
from .fpairs import FPair, make_pair, to_reduced_pair
from .free import enumerate_matches, graev_dist_free, graev_norm_free, motzkin, reduce_word
from .groups import FiniteGroup, symmetric_group
from .hnn import build_hnn, stable_letter_norm
from .metrics import InvariantUltrametric, NormalChain, metric_from_chain
from .product import ProductMetric, product_norm, product_norm_dp
from .report import BoundError, GraevError, ValidationError, ValidationReport
from .scaled import ScaledSpace, graev_norm_scaled
from .spaces import FiniteSpace, add_formal_inverses, validate_space

__version__ = "0.1.0"

__all__ = [
    "AmalgamSetup", "ProductElem", "build_multi_setup", "build_setup", "subgroup_as_group",
    "EvaluationForest", "build_maximal_forest", "check_forest", "check_maximal", "enumerate_maximal_forests",
    "FPair", "make_pair", "to_reduced_pair",
    "enumerate_matches", "graev_dist_free", "graev_norm_free", "motzkin", "reduce_word",
    "FiniteGroup", "symmetric_group", "build_hnn", "stable_letter_norm",
    "InvariantUltrametric", "NormalChain", "metric_from_chain",
    "ProductMetric", "product_norm", "product_norm_dp",
    "BoundError", "GraevError", "ValidationError", "ValidationReport",
    "ScaledSpace", "graev_norm_scaled", "FiniteSpace", "add_formal_inverses", "validate_space",
]
