"""Solver implementations behind the common solve/check_input contract."""

from .base import (HistoryEntry, Solver, SolverResult, SolverStats,
                   check_input)
from .classical import (DEFAULT_BRUTE_FORCE_MAX_VARS, BruteForceSolver,
                        TabuSolver, brute_force, tabu_search)
from .optimizers import OptimizeOutcome, OptimizerSpec, nelder_mead, spsa
from .variational import QaoaSolver, VqeSolver, qaoa, vqe

__all__ = [
    "DEFAULT_BRUTE_FORCE_MAX_VARS",
    "BruteForceSolver",
    "HistoryEntry",
    "OptimizeOutcome",
    "OptimizerSpec",
    "QaoaSolver",
    "Solver",
    "SolverResult",
    "SolverStats",
    "TabuSolver",
    "VqeSolver",
    "brute_force",
    "check_input",
    "nelder_mead",
    "qaoa",
    "spsa",
    "tabu_search",
    "vqe",
]
