"""Hardness constructions with witness colorings and width certificates."""

from .filling import Filling, ceil_log2, tree_filling
from .mcc import (MccInstance, ReductionOutput, apply_tree_filling, build_gprime_path_decomposition,
                  build_mcc_reduction, mcc_target_count, mcc_threshold, mcc_witness_coloring)
from .sat import (CnfFormula, SatReduction, build_cw8_expression, build_sat_reduction,
                  parse_dimacs_cnf, sat_target, sat_witness_coloring)

__all__ = [
    "Filling", "ceil_log2", "tree_filling",
    "MccInstance", "ReductionOutput", "apply_tree_filling", "build_gprime_path_decomposition",
    "build_mcc_reduction", "mcc_target_count", "mcc_threshold", "mcc_witness_coloring",
    "CnfFormula", "SatReduction", "build_cw8_expression", "build_sat_reduction",
    "parse_dimacs_cnf", "sat_target", "sat_witness_coloring",
]
