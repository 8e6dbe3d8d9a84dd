"""Common solver contract and result type.

A solver consumes prepared entries of the shared problem-data mapping
(classical samplers read "qubo", variational algorithms read "ising") and
returns a SolverResult whose best_energy is always the exact model energy
of best_bits.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..circuits import Circuit


@dataclass
class HistoryEntry:
    """One objective evaluation: call index, parameter vector, value."""

    iteration: int
    params: tuple[float, ...]
    energy: float

    def to_json_dict(self) -> dict:
        return {"iteration": self.iteration, "energy": self.energy}


@dataclass
class SolverStats:
    iterations: int = 0
    circuit_evaluations: int = 0
    wall_time_ms: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "circuit_evaluations": self.circuit_evaluations,
            "wall_time_ms": self.wall_time_ms,
        }


@dataclass
class SolverResult:
    best_bits: list[int]
    best_energy: float
    counts: dict[str, int] | None = None
    best_circuit: Circuit | None = None
    history: list[HistoryEntry] = field(default_factory=list)
    stats: SolverStats = field(default_factory=SolverStats)

    def to_result_dict(self) -> dict:
        """Initial backward-pass result dictionary."""
        out = {
            "best_bits": list(self.best_bits),
            "best_energy": self.best_energy,
            "history": [h.to_json_dict() for h in self.history],
            "stats": self.stats.to_json_dict(),
        }
        if self.counts is not None:
            out["counts"] = dict(self.counts)
        if self.best_circuit is not None:
            out["best_circuit"] = self.best_circuit
        return out


class Solver(ABC):
    """Named algorithm with an input check and a solve entry point."""

    name: str = ""
    required_entries: dict[str, type] = {}

    def check_input(self, problem_data: Mapping) -> bool:
        """True iff every required entry exists and has the right type."""
        for key, expected in self.required_entries.items():
            if key not in problem_data:
                return False
            if not isinstance(problem_data[key], expected):
                return False
        return True

    @abstractmethod
    def solve(self, problem_data: Mapping) -> SolverResult:
        ...


def check_input(solver: Solver, problem_data: Mapping) -> bool:
    return solver.check_input(problem_data)


def lexicographic_key(bits: Sequence[int]) -> tuple[int, ...]:
    """Tie-break key: the bit tuple itself, variable 0 first."""
    return tuple(int(b) for b in bits)
