"""Grundy numbers of graphs: exact oracles, width-parameterized solvers, reductions."""

from .coloring import (GrundyColoring, TargetSpec, Violation, color_upper_bounds, exact_witness,
                       first_fit, first_fit_search, gamma_exact, gamma_orderings,
                       grundy_upper_bound, verify_grundy, verify_targets)
from .cwexpr import Intro, Join, Rename, Union, eval_cw_expression, parse_sexpr, to_sexpr
from .decompositions import (DecompositionVerdict, NiceTreeDecomposition, PathDecomposition,
                             TreeDecomposition, exact_width_small, min_degree_decomposition,
                             to_nice, verify_decomposition)
from .dp import gamma_pw, gamma_tw, grundy_decision_dp
from .errors import BudgetExceeded, GrundyError, InvalidArgument
from .graph import (Graph, RootedTree, attach_clique_supports, attach_tree_supports,
                    build_binomial_tree, find_disjoint_subtrees)
from .modular import (compute_twin_classes, enumerate_patterns, gamma_mw, gamma_nd, is_eligible,
                      modular_partition, reduce_false_twins, replace_module_with_clique,
                      solve_pattern_program)

__version__ = "0.1.0"

__all__ = [
    "GrundyColoring", "TargetSpec", "Violation", "color_upper_bounds", "exact_witness",
    "first_fit", "first_fit_search", "gamma_exact", "gamma_orderings", "grundy_upper_bound",
    "verify_grundy", "verify_targets",
    "Intro", "Join", "Rename", "Union", "eval_cw_expression", "parse_sexpr", "to_sexpr",
    "DecompositionVerdict", "NiceTreeDecomposition", "PathDecomposition", "TreeDecomposition",
    "exact_width_small", "min_degree_decomposition", "to_nice", "verify_decomposition",
    "gamma_pw", "gamma_tw", "grundy_decision_dp",
    "BudgetExceeded", "GrundyError", "InvalidArgument",
    "Graph", "RootedTree", "attach_clique_supports", "attach_tree_supports",
    "build_binomial_tree", "find_disjoint_subtrees",
    "compute_twin_classes", "enumerate_patterns", "gamma_mw", "gamma_nd", "is_eligible",
    "modular_partition", "reduce_false_twins", "replace_module_with_clique",
    "solve_pattern_program",
]
