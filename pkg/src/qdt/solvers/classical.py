"""Classical baselines: exhaustive search and multistart tabu.

Bit vectors are indexed by variable; enumeration maps basis index i to
bits (i >> v) & 1.  Energy ties break toward the lexicographically
smallest bit tuple (variable 0 first).
"""

from __future__ import annotations

import time
from typing import Mapping

import numpy as np

from ..encodings import QuboModel, evaluate_qubo
from ..errors import TooManyVariables
from .base import Solver, SolverResult, SolverStats

DEFAULT_BRUTE_FORCE_MAX_VARS = 22
_CHUNK_BITS = 16


def _bit_matrix(indices: np.ndarray, num_vars: int) -> np.ndarray:
    return ((indices[:, None] >> np.arange(num_vars)) & 1).astype(float)


def _lex_rank(indices: np.ndarray, num_vars: int) -> np.ndarray:
    """Integer whose order matches lexicographic order of the bit tuples."""
    rank = np.zeros_like(indices)
    for v in range(num_vars):
        rank |= ((indices >> v) & 1) << (num_vars - 1 - v)
    return rank


def brute_force(qubo: QuboModel,
                max_vars: int = DEFAULT_BRUTE_FORCE_MAX_VARS) -> SolverResult:
    """Exact global minimum by chunked enumeration of all 2^n assignments."""
    start = time.perf_counter()
    n = qubo.num_vars
    if n > max_vars:
        raise TooManyVariables(f"{n} variables exceeds the cap of {max_vars}")
    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)

    best_energy = np.inf
    best_rank = None
    best_index = 0
    for lo in range(0, total, chunk):
        indices = np.arange(lo, min(lo + chunk, total))
        x = _bit_matrix(indices, n)
        energies = np.einsum("ij,ij->i", x @ qubo.q, x) + qubo.offset
        lo_energy = float(energies.min())
        if lo_energy > best_energy:
            continue
        ties = indices[energies == lo_energy]
        ranks = _lex_rank(ties, n)
        k = int(np.argmin(ranks))
        if lo_energy < best_energy or (best_rank is None or ranks[k] < best_rank):
            best_energy = lo_energy
            best_rank = int(ranks[k])
            best_index = int(ties[k])

    bits = [(best_index >> v) & 1 for v in range(n)]
    elapsed = (time.perf_counter() - start) * 1000.0
    return SolverResult(
        best_bits=bits,
        best_energy=float(evaluate_qubo(qubo, bits)),
        stats=SolverStats(iterations=total, circuit_evaluations=0,
                          wall_time_ms=elapsed),
    )


def tabu_search(qubo: QuboModel, restarts: int = 10,
                iters_per_restart: int | None = None,
                tenure: int | None = None,
                seed: int = 0) -> SolverResult:
    """Multistart single-flip tabu search over the QUBO.

    All restarts advance in lockstep (vectorized over the restart axis); a
    restart's randomness comes only from its own seeded start point, so
    the outcome matches running them one by one with seeds seed + i.
    Each iteration flips the best non-tabu variable, a tabu flip being
    allowed when it improves that restart's incumbent; the flipped
    variable then stays tabu for ``tenure`` iterations.  Flip gains are
    maintained incrementally at O(n) per move.
    """
    start = time.perf_counter()
    n = qubo.num_vars
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if iters_per_restart is None:
        iters_per_restart = 500 * n
    if tenure is None:
        tenure = max(7, n // 10)

    diag = np.diag(qubo.q).copy()
    sym = np.triu(qubo.q, 1)
    sym = sym + sym.T

    x = np.stack([np.random.default_rng(seed + i).integers(0, 2, size=n)
                  for i in range(restarts)]).astype(float)
    energies = np.einsum("ij,ij->i", x @ qubo.q, x) + qubo.offset
    # gain[r, v] = energy change if restart r flips variable v
    gain = (1.0 - 2.0 * x) * (diag + x @ sym)
    expiry = np.zeros((restarts, n), dtype=np.int64)

    best_x = x.copy()
    best_energy = energies.copy()
    rows = np.arange(restarts)

    for it in range(iters_per_restart):
        allowed = (expiry <= it) | (energies[:, None] + gain
                                    < best_energy[:, None] - 1e-12)
        stuck = ~allowed.any(axis=1)
        if stuck.any():
            allowed[stuck] = True
        masked = np.where(allowed, gain, np.inf)
        flip = np.argmin(masked, axis=1)

        step = gain[rows, flip]
        dx = 1.0 - 2.0 * x[rows, flip]
        energies = energies + step
        x[rows, flip] = 1.0 - x[rows, flip]
        gain = gain + (1.0 - 2.0 * x) * sym[flip] * dx[:, None]
        gain[rows, flip] = -step
        expiry[rows, flip] = it + 1 + tenure

        improved = energies < best_energy - 1e-12
        if improved.any():
            best_energy[improved] = energies[improved]
            best_x[improved] = x[improved]

    # deterministic merge: best energy, earliest restart on ties
    winner = int(np.argmin(best_energy))
    bits = [int(b) for b in best_x[winner]]
    elapsed = (time.perf_counter() - start) * 1000.0
    return SolverResult(
        best_bits=bits,
        best_energy=float(evaluate_qubo(qubo, bits)),
        stats=SolverStats(iterations=restarts * iters_per_restart,
                          circuit_evaluations=0, wall_time_ms=elapsed),
    )


class BruteForceSolver(Solver):
    name = "brute_force"
    required_entries = {"qubo": QuboModel}

    def __init__(self, max_vars: int = DEFAULT_BRUTE_FORCE_MAX_VARS):
        self.max_vars = max_vars

    def solve(self, problem_data: Mapping) -> SolverResult:
        return brute_force(problem_data["qubo"], max_vars=self.max_vars)


class TabuSolver(Solver):
    name = "tabu"
    required_entries = {"qubo": QuboModel}

    def __init__(self, restarts: int = 10, iters_per_restart: int | None = None,
                 tenure: int | None = None, seed: int = 0):
        self.restarts = restarts
        self.iters_per_restart = iters_per_restart
        self.tenure = tenure
        self.seed = seed

    def solve(self, problem_data: Mapping) -> SolverResult:
        return tabu_search(problem_data["qubo"], restarts=self.restarts,
                           iters_per_restart=self.iters_per_restart,
                           tenure=self.tenure, seed=self.seed)
