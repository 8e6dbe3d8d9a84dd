"""Variational solvers: expectation minimization over parameterized circuits.

The optimization loop always uses the exact statevector expectation (no
shot noise); sampled counts are attached to the result afterwards for
realism.  The reported basis state is picked deterministically from the
final state: among the 16 most probable states, the one with the lowest
model energy, ties toward the lexicographically smallest bitstring.
"""

from __future__ import annotations

import time
from typing import Mapping

import numpy as np

from ..circuits import (Circuit, build_qaoa_circuit, expectation,
                        ising_energy_table, sample, simulate)
from ..circuits.simulator import DEFAULT_MAX_QUBITS, basis_bits
from ..encodings import IsingModel
from ..errors import SizeMismatch
from .base import Solver, SolverResult, SolverStats
from .optimizers import OptimizerSpec

_TOP_STATES = 16
DEFAULT_SHOTS = 1024


def _best_basis_state(state, ising: IsingModel) -> tuple[list[int], float]:
    probs = state.probabilities()
    energies = ising_energy_table(ising, state.num_qubits)
    order = np.argsort(-probs, kind="stable")[:min(_TOP_STATES, len(probs))]
    candidates = order[energies[order] == energies[order].min()]
    n = state.num_qubits
    best = min(candidates, key=lambda i: tuple(basis_bits(int(i), n)))
    return basis_bits(int(best), n), float(energies[int(best)])


def _run_variational(circuit: Circuit, ising: IsingModel,
                     optimizer: OptimizerSpec, seed: int | None,
                     init_low: float, init_high: float,
                     shots: int, max_qubits: int) -> SolverResult:
    start = time.perf_counter()
    names = circuit.parameters
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(init_low, init_high, size=len(names))

    def objective(theta):
        state = simulate(circuit, dict(zip(names, theta)), max_qubits=max_qubits)
        return expectation(state, ising)

    outcome = optimizer.minimize(objective, x0, seed=seed)
    bindings = dict(zip(names, (float(v) for v in outcome.x)))
    final_state = simulate(circuit, bindings, max_qubits=max_qubits)
    bits, energy = _best_basis_state(final_state, ising)
    counts = sample(final_state, shots, seed=seed) if shots else None

    elapsed = (time.perf_counter() - start) * 1000.0
    return SolverResult(
        best_bits=bits,
        best_energy=energy,
        counts=counts,
        best_circuit=circuit.bound(bindings),
        history=outcome.history,
        stats=SolverStats(iterations=outcome.iterations,
                          circuit_evaluations=len(outcome.history),
                          wall_time_ms=elapsed),
    )


def vqe(ising: IsingModel, ansatz: Circuit, optimizer: OptimizerSpec,
        seed: int | None = None, shots: int = DEFAULT_SHOTS,
        max_qubits: int = DEFAULT_MAX_QUBITS) -> SolverResult:
    """Minimize <ansatz(theta)| H |ansatz(theta)>; theta starts uniform in
    [-0.1, 0.1]."""
    if ansatz.num_qubits != ising.num_spins:
        raise SizeMismatch(
            f"ansatz has {ansatz.num_qubits} qubits, model has {ising.num_spins} spins")
    return _run_variational(ansatz, ising, optimizer, seed,
                            -0.1, 0.1, shots, max_qubits)


def qaoa(ising: IsingModel, mixer: Circuit, p: int, optimizer: OptimizerSpec,
         seed: int | None = None, shots: int = DEFAULT_SHOTS,
         max_qubits: int = DEFAULT_MAX_QUBITS) -> SolverResult:
    """Alternating cost/mixer circuit with 2p angles starting uniform in
    [0, 0.1]."""
    circuit = build_qaoa_circuit(ising, mixer, p)
    return _run_variational(circuit, ising, optimizer, seed,
                            0.0, 0.1, shots, max_qubits)


class VqeSolver(Solver):
    name = "vqe"
    required_entries = {"ising": IsingModel}

    def __init__(self, ansatz: Circuit, optimizer: OptimizerSpec,
                 seed: int | None = None, shots: int = DEFAULT_SHOTS,
                 max_qubits: int = DEFAULT_MAX_QUBITS):
        self.ansatz = ansatz
        self.optimizer = optimizer
        self.seed = seed
        self.shots = shots
        self.max_qubits = max_qubits

    def solve(self, problem_data: Mapping) -> SolverResult:
        return vqe(problem_data["ising"], self.ansatz, self.optimizer,
                   seed=self.seed, shots=self.shots, max_qubits=self.max_qubits)


class QaoaSolver(Solver):
    name = "qaoa"
    required_entries = {"ising": IsingModel}

    def __init__(self, mixer: Circuit, p: int, optimizer: OptimizerSpec,
                 seed: int | None = None, shots: int = DEFAULT_SHOTS,
                 max_qubits: int = DEFAULT_MAX_QUBITS):
        self.mixer = mixer
        self.p = p
        self.optimizer = optimizer
        self.seed = seed
        self.shots = shots
        self.max_qubits = max_qubits

    def solve(self, problem_data: Mapping) -> SolverResult:
        return qaoa(problem_data["ising"], self.mixer, self.p, self.optimizer,
                    seed=self.seed, shots=self.shots, max_qubits=self.max_qubits)
