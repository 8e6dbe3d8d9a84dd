"""Problem classes: the application-facing end of the pipeline."""

from __future__ import annotations

from ..errors import MissingField
from .base import (OptimizationProblem, Solution, available_problem_classes,
                   get_problem_class, register_problem_class)
from .discrete import DiscreteProblem
from .maxcut import MaxCutInstance
from .tsp import TspInstance

__all__ = [
    "DiscreteProblem",
    "MaxCutInstance",
    "OptimizationProblem",
    "Solution",
    "TspInstance",
    "available_problem_classes",
    "create_random_instance",
    "from_record",
    "get_problem_class",
    "register_problem_class",
]


def create_random_instance(problem_class: str, size: int, seed: int) -> OptimizationProblem:
    return get_problem_class(problem_class).create_random_instance(size, seed)


def from_record(record: dict) -> OptimizationProblem:
    """Build an instance from a JSON record, dispatching on problem_class."""
    if "problem_class" not in record:
        raise MissingField("problem_class")
    return get_problem_class(record["problem_class"]).from_record(record)
