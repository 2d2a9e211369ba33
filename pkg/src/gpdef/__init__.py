"""Exact computations with finite-dimensional quotient path algebras.

The main entry points are re-exported here; the submodules hold the rest.
"""

from .algebra import Algebra, build_path_algebra, enveloping, opposite, truncated_polynomial
from .bimodule import check_sing_equiv_level, verify_decomposition, verify_lifted_syzygy_tensor, verify_syzygy_tensor
from .deformation import tangent_dimension, udr_truncation_report, verify_syzygy_invariance, verify_transport_invariance
from .homology import ext_dim, is_gorenstein, is_totally_reflexive, stable_end_dim, transpose
from .linalg import Q, Field
from .modules import Bimodule, Module, find_isomorphism, hom_space, is_isomorphic, realize, string_module, syzygy
from .presentation import parse_document, parse_presentation

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "Bimodule",
    "Field",
    "Module",
    "Q",
    "build_path_algebra",
    "check_sing_equiv_level",
    "enveloping",
    "ext_dim",
    "find_isomorphism",
    "hom_space",
    "is_gorenstein",
    "is_isomorphic",
    "is_totally_reflexive",
    "opposite",
    "parse_document",
    "parse_presentation",
    "realize",
    "stable_end_dim",
    "string_module",
    "syzygy",
    "tangent_dimension",
    "transpose",
    "truncated_polynomial",
    "udr_truncation_report",
    "verify_decomposition",
    "verify_lifted_syzygy_tensor",
    "verify_syzygy_invariance",
    "verify_syzygy_tensor",
    "verify_transport_invariance",
]
