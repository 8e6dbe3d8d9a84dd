"""Guided decision-tree pipeline for quantum-assisted combinatorial
optimization: problem loading, QUBO/Ising encoding, hybrid algorithm
construction, simulated execution, and reverse interpretation of results.
"""

from . import (builders, circuits, encodings, engine, nodes, problems,
               queries, solvers)

__version__ = "0.1.0"

__all__ = [
    "builders",
    "circuits",
    "encodings",
    "engine",
    "nodes",
    "problems",
    "queries",
    "solvers",
    "__version__",
]
