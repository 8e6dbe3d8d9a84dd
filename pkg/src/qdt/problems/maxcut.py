"""Weighted MaxCut instances and their direct QUBO formulation.

The cut value of a node partition is the total weight of edges whose
endpoints land on different sides.  MaxCut maximizes, so the direct
formulation minimizes the negated cut with one binary variable per node:
an edge (u, v, w) contributes  -w * (x_u + x_v - 2 x_u x_v).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..encodings import DecodingMap, QuboModel, VariableRange
from ..errors import (InvalidSolutionShape, MissingField, ShapeMismatch,
                      SizeTooSmall, UndecodableState, UnsupportedEncoding)
from .base import OptimizationProblem, Solution, register_problem_class
from .discrete import DiscreteProblem


@register_problem_class
class MaxCutInstance(OptimizationProblem):
    problem_class = "maxcut"
    objective_sense = "max"
    min_size = 2
    direct_encodings = ("direct",)

    def __init__(self, num_nodes: int, edges, metadata=None):
        if num_nodes < 2:
            raise ShapeMismatch("a cut needs at least 2 nodes")
        self.num_nodes = int(num_nodes)
        seen = set()
        clean: list[tuple[int, int, float]] = []
        for edge in edges:
            if len(edge) == 2:
                u, v, w = int(edge[0]), int(edge[1]), 1.0
            elif len(edge) == 3:
                u, v, w = int(edge[0]), int(edge[1]), float(edge[2])
            else:
                raise ShapeMismatch(f"edge must be [u, v] or [u, v, w], got {edge}")
            if not 0 <= u < v < self.num_nodes:
                raise ShapeMismatch(f"edge ({u},{v}) must satisfy 0 <= u < v < n")
            if (u, v) in seen:
                raise ShapeMismatch(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            clean.append((u, v, w))
        self.edges = clean
        self.metadata = dict(metadata) if metadata else {}

    def __eq__(self, other):
        return (isinstance(other, MaxCutInstance)
                and self.num_nodes == other.num_nodes
                and self.edges == other.edges
                and self.metadata == other.metadata)

    def __repr__(self):
        return f"MaxCutInstance({self.num_nodes} nodes, {len(self.edges)} edges)"

    @classmethod
    def create_random_instance(cls, size: int, seed: int) -> "MaxCutInstance":
        if size < cls.min_size:
            raise SizeTooSmall(f"a cut needs at least {cls.min_size} nodes")
        rng = np.random.default_rng(seed)
        edges = [(u, v, 1.0)
                 for u in range(size) for v in range(u + 1, size)
                 if rng.random() < 0.5]
        return cls(size, edges)

    @classmethod
    def from_record(cls, record: dict) -> "MaxCutInstance":
        for key in ("num_nodes", "edges"):
            if key not in record:
                raise MissingField(key)
        return cls(record["num_nodes"], record["edges"],
                   metadata=record.get("metadata"))

    def to_record(self) -> dict:
        record = {
            "problem_class": self.problem_class,
            "num_nodes": self.num_nodes,
            "edges": [[u, v, w] for u, v, w in self.edges],
        }
        if self.metadata:
            record["metadata"] = dict(self.metadata)
        return record

    def evaluate_objective(self, payload: Sequence[int]) -> float:
        partition = list(payload)
        if len(partition) != self.num_nodes or any(b not in (0, 1) for b in partition):
            raise InvalidSolutionShape(
                f"partition must be {self.num_nodes} bits")
        return float(sum(w for u, v, w in self.edges
                         if partition[u] != partition[v]))

    def recommended_penalty(self) -> float:
        total = sum(abs(w) for _, _, w in self.edges)
        return float(1.0 + 2.0 * total)

    def formulate_problem(self, encoding: str) -> tuple[QuboModel, DecodingMap]:
        if encoding != "direct":
            raise UnsupportedEncoding(
                f"maxcut supports 'direct', not '{encoding}'")
        linear: dict[int, float] = {}
        quadratic: dict[tuple[int, int], float] = {}
        for u, v, w in self.edges:
            linear[u] = linear.get(u, 0.0) - w
            linear[v] = linear.get(v, 0.0) - w
            quadratic[(u, v)] = quadratic.get((u, v), 0.0) + 2.0 * w
        qubo = QuboModel.from_terms(self.num_nodes, linear, quadratic, 0.0)
        decoding = DecodingMap(
            scheme="direct",
            variables=[VariableRange(f"node_{i}", 2, i, 1)
                       for i in range(self.num_nodes)],
        )
        return qubo, decoding

    def to_discrete_problem(self) -> DiscreteProblem:
        variables = [(f"node_{i}", 2) for i in range(self.num_nodes)]
        terms: list[tuple[float, list[tuple[str, int]]]] = []
        for u, v, w in self.edges:
            terms.append((-w, [(f"node_{u}", 0), (f"node_{v}", 1)]))
            terms.append((-w, [(f"node_{u}", 1), (f"node_{v}", 0)]))
        return DiscreteProblem(variables, terms, [])

    def decode_solution(self, bits: Sequence[int], decoding: DecodingMap) -> Solution:
        try:
            values, repaired = decoding.decode_bits(bits)
        except Exception as exc:
            raise UndecodableState(str(exc)) from exc
        return self.assignment_to_solution(values, repaired)

    def assignment_to_solution(self, values: Sequence[int | None], repaired: bool) -> Solution:
        partition = [0 if v is None else int(v) for v in values]
        if any(v is None for v in values):
            repaired = True
        return Solution(objective=self.evaluate_objective(partition),
                        partition=partition, repaired=repaired)
