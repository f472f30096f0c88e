"""Matching-based bounds, variable reduction and a ranked-pool matheuristic
for set partitioning problems with packing constraints."""

from __future__ import annotations

__version__ = "0.1.0"

from .core import (
    INF,
    Assignment,
    CapacitatedResource,
    Instance,
    Solution,
    brute_force_optima,
    compatible,
    evaluate,
    register_oracle,
    trivial_bound,
    validate_instance,
)
from .errors import ContractError, FormatError, GSPPError, InfeasibleError, SizeError
from .exact import SolveResult, branch_and_bound, export_lp, solve
from .formats import read_instance, write_instance
from .matching import Matching, WeightedGraph, brute_force_matching, max_weight_matching
from .matheuristic import RankedPool, RankingParams, matheuristic_solve, rank_variables, select_variables
from .reduction import ReductionResult, reduce
from .relaxation import bound_report, build_g1, build_g2, lb1, lb2, probe_all, probe_bound

__all__ = [
    "INF",
    "Assignment",
    "CapacitatedResource",
    "ContractError",
    "FormatError",
    "GSPPError",
    "InfeasibleError",
    "Instance",
    "Matching",
    "RankedPool",
    "RankingParams",
    "ReductionResult",
    "SizeError",
    "Solution",
    "SolveResult",
    "WeightedGraph",
    "bound_report",
    "branch_and_bound",
    "brute_force_matching",
    "brute_force_optima",
    "build_g1",
    "build_g2",
    "compatible",
    "evaluate",
    "export_lp",
    "lb1",
    "lb2",
    "matheuristic_solve",
    "max_weight_matching",
    "probe_all",
    "probe_bound",
    "rank_variables",
    "read_instance",
    "reduce",
    "register_oracle",
    "select_variables",
    "solve",
    "trivial_bound",
    "validate_instance",
    "write_instance",
]
