"""Problem-class contract and registry.

A problem class ties an application-level optimization problem to the
machinery of the pipeline: random instance generation, JSON round trips,
objective evaluation, direct QUBO formulation and/or the generic discrete
route, and decoding of solver bitstrings back into application solutions.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Sequence

from ..encodings import DecodingMap, QuboModel
from .discrete import DiscreteProblem


@dataclass
class Solution:
    """Application-level answer decoded from a solver result."""

    objective: float
    tour: list[int] | None = None
    partition: list[int] | None = None
    repaired: bool = False

    def payload(self):
        return self.tour if self.tour is not None else self.partition

    def to_json_dict(self) -> dict:
        out = {"objective": self.objective, "repaired": self.repaired}
        if self.tour is not None:
            out["tour"] = list(self.tour)
        if self.partition is not None:
            out["partition"] = list(self.partition)
        return out


class OptimizationProblem(ABC):
    """Interface every problem class implements.

    Class attributes:
        problem_class: registry key and the "problem_class" record field.
        objective_sense: "min" or "max"; a minimizing model energy maps to
            the application objective through this sense.
        min_size: smallest size create_random_instance accepts.
        direct_encodings: encoding names formulate_problem supports.
    """

    problem_class: str = ""
    objective_sense: str = "min"
    min_size: int = 2
    direct_encodings: tuple[str, ...] = ()

    metadata: dict

    @classmethod
    @abstractmethod
    def create_random_instance(cls, size: int, seed: int) -> "OptimizationProblem":
        ...

    @classmethod
    @abstractmethod
    def from_record(cls, record: dict) -> "OptimizationProblem":
        ...

    @abstractmethod
    def to_record(self) -> dict:
        ...

    @abstractmethod
    def evaluate_objective(self, payload: Sequence[int]) -> float:
        ...

    @abstractmethod
    def formulate_problem(self, encoding: str) -> tuple[QuboModel, DecodingMap]:
        ...

    @abstractmethod
    def to_discrete_problem(self) -> DiscreteProblem:
        ...

    @abstractmethod
    def decode_solution(self, bits: Sequence[int], decoding: DecodingMap) -> Solution:
        ...

    @abstractmethod
    def assignment_to_solution(self, values: Sequence[int | None], repaired: bool) -> Solution:
        """Turn decoded discrete values (possibly with holes) into a Solution."""

    def recommended_penalty(self) -> float:
        """Constraint penalty weight that dominates any objective change."""
        return 1.0

    @property
    def formulation_options(self) -> list[str]:
        """Choices offered when selecting a formulation for this instance."""
        return [f"{enc}-direct" if enc != "direct" else "direct"
                for enc in self.direct_encodings] + ["discrete"]

    def signed_objective_from_energy(self, energy: float, shift: float = 0.0) -> float:
        """Map a minimization-model energy back to application units."""
        value = energy - shift
        return -value if self.objective_sense == "max" else value


_REGISTRY: dict[str, type[OptimizationProblem]] = {}


def register_problem_class(cls: type[OptimizationProblem]) -> type[OptimizationProblem]:
    if not cls.problem_class:
        raise ValueError("problem_class name must be set")
    _REGISTRY[cls.problem_class] = cls
    return cls


def get_problem_class(name: str) -> type[OptimizationProblem]:
    if name not in _REGISTRY:
        raise KeyError(f"unknown problem class '{name}'")
    return _REGISTRY[name]


def available_problem_classes() -> list[str]:
    return list(_REGISTRY)
