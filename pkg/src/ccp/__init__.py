"""Exact solvers for partitioning node-colored graphs into colorful components."""

from .bench import BenchRow, GenSpec, generate, planted_blocks, run_bench
from .bounds import BoundsResult, bound_and_warmstart
from .engine import SearchConfig, SolveReport, certify, solve
from .graph import ColoredGraph, InstanceFormatError, format_instance, parse_instance
from .milp import ModelConfig, build_model, export_lp, validate_point
from .oracle import enumerate_optima, oracle_all
from .pipeline import RunOptions, RunResult, run
from .prep import find_best_cut, preprocess_mop
from .separation import IntegerPoint, separate_connectivity, separate_paths
from .solution import Partition, Problem, check_feasible, objective

__all__ = [
    "BenchRow",
    "BoundsResult",
    "ColoredGraph",
    "GenSpec",
    "InstanceFormatError",
    "IntegerPoint",
    "ModelConfig",
    "Partition",
    "Problem",
    "RunOptions",
    "RunResult",
    "SearchConfig",
    "SolveReport",
    "bound_and_warmstart",
    "build_model",
    "certify",
    "check_feasible",
    "enumerate_optima",
    "export_lp",
    "find_best_cut",
    "format_instance",
    "generate",
    "objective",
    "oracle_all",
    "parse_instance",
    "planted_blocks",
    "preprocess_mop",
    "run",
    "run_bench",
    "separate_connectivity",
    "separate_paths",
    "solve",
    "validate_point",
]
