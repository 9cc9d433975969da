"""Exact computations in Tsirelson's space T, its dual T*, and finite-subset graph metrics."""
from .dualnorm import DualCertificatePair, check_block_inequality, tstar_norm, tstar_norm_bruteforce
from .ratvec import SparseVector, parse_vector, restrict, support, sup_norm
from .tnorm import Leaf, Node, evaluate_functional, t_norm, t_norm_bruteforce, t_norm_level, validate_functional

__all__ = [
    "DualCertificatePair",
    "Leaf",
    "Node",
    "SparseVector",
    "check_block_inequality",
    "evaluate_functional",
    "parse_vector",
    "restrict",
    "sup_norm",
    "support",
    "t_norm",
    "t_norm_bruteforce",
    "t_norm_level",
    "tstar_norm",
    "tstar_norm_bruteforce",
    "validate_functional",
]
