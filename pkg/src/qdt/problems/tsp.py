"""Traveling salesperson instances and their one-hot formulation.

An instance is an n x n distance matrix (asymmetric allowed, zero
diagonal).  The closed-tour length is the application objective.  The
one-hot formulation pins city 0 to position 0, leaving (n-1)^2 binary
variables x[city, position] with exactly-one penalties per position and
per city.
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
class TspInstance(OptimizationProblem):
    problem_class = "tsp"
    objective_sense = "min"
    min_size = 3
    direct_encodings = ("one-hot",)

    def __init__(self, distances, coordinates=None, labels=None, metadata=None):
        d = np.asarray(distances, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ShapeMismatch(f"distance matrix must be square, got {d.shape}")
        n = d.shape[0]
        if n < 3:
            raise ShapeMismatch("a tour needs at least 3 cities")
        if np.any(np.diag(d) != 0.0):
            raise ShapeMismatch("distance matrix diagonal must be zero")
        if np.any(d < 0.0):
            raise ShapeMismatch("distances must be non-negative")
        self.distances = d
        self.distances.setflags(write=False)
        self.coordinates = None
        if coordinates is not None:
            c = np.asarray(coordinates, dtype=float)
            if c.shape != (n, 2):
                raise ShapeMismatch(f"coordinates must be {n}x2, got {c.shape}")
            self.coordinates = c
            self.coordinates.setflags(write=False)
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise ShapeMismatch("one label per city required")
        self.metadata = dict(metadata) if metadata else {}

    @property
    def num_cities(self) -> int:
        return self.distances.shape[0]

    def __eq__(self, other):
        return (isinstance(other, TspInstance)
                and np.array_equal(self.distances, other.distances)
                and ((self.coordinates is None) == (other.coordinates is None))
                and (self.coordinates is None
                     or np.array_equal(self.coordinates, other.coordinates))
                and self.labels == other.labels
                and self.metadata == other.metadata)

    def __repr__(self):
        return f"TspInstance({self.num_cities} cities)"

    @classmethod
    def create_random_instance(cls, size: int, seed: int) -> "TspInstance":
        if size < cls.min_size:
            raise SizeTooSmall(f"a tour needs at least {cls.min_size} cities")
        rng = np.random.default_rng(seed)
        d = rng.integers(1, 101, size=(size, size)).astype(float)
        np.fill_diagonal(d, 0.0)
        return cls(d)

    @classmethod
    def from_record(cls, record: dict) -> "TspInstance":
        if "distances" not in record:
            raise MissingField("distances")
        return cls(
            record["distances"],
            coordinates=record.get("coordinates"),
            labels=record.get("labels"),
            metadata=record.get("metadata"),
        )

    def to_record(self) -> dict:
        record = {
            "problem_class": self.problem_class,
            "distances": self.distances.tolist(),
        }
        if self.coordinates is not None:
            record["coordinates"] = self.coordinates.tolist()
        if self.labels is not None:
            record["labels"] = list(self.labels)
        if self.metadata:
            record["metadata"] = dict(self.metadata)
        return record

    def evaluate_objective(self, payload: Sequence[int]) -> float:
        tour = list(payload)
        n = self.num_cities
        if sorted(tour) != list(range(n)):
            raise InvalidSolutionShape(
                f"tour must be a permutation of 0..{n - 1}, got {tour}")
        length = 0.0
        for a, b in zip(tour, tour[1:] + tour[:1]):
            length += self.distances[a, b]
        return float(length)

    def recommended_penalty(self) -> float:
        # larger than any tour-cost change a single violation could buy
        return float(1.0 + 2.0 * self.num_cities * self.distances.max())

    # --- one-hot formulation, city 0 fixed at position 0 ---

    def _bit(self, position: int, city: int) -> int:
        """Bit index of x[city at position]; both run over 1..n-1."""
        m = self.num_cities - 1
        return (position - 1) * m + (city - 1)

    def formulate_problem(self, encoding: str) -> tuple[QuboModel, DecodingMap]:
        if encoding != "one-hot":
            raise UnsupportedEncoding(
                f"tsp supports 'one-hot' directly, not '{encoding}'")
        n = self.num_cities
        m = n - 1
        d = self.distances
        penalty = self.recommended_penalty()

        linear: dict[int, float] = {}
        quadratic: dict[tuple[int, int], float] = {}

        def add_linear(b, c):
            linear[b] = linear.get(b, 0.0) + c

        def add_quad(a, b, c):
            key = (min(a, b), max(a, b))
            quadratic[key] = quadratic.get(key, 0.0) + c

        # tour cost: fixed city 0 to first position, inner legs, closing leg
        for v in range(1, n):
            add_linear(self._bit(1, v), d[0, v])
            add_linear(self._bit(m, v), d[v, 0])
        for t in range(1, m):
            for u in range(1, n):
                for v in range(1, n):
                    if u == v:
                        continue
                    add_quad(self._bit(t, u), self._bit(t + 1, v), d[u, v])

        # exactly-one penalties per position and per city
        groups = [[self._bit(t, v) for v in range(1, n)] for t in range(1, n)]
        groups += [[self._bit(t, v) for t in range(1, n)] for v in range(1, n)]
        offset = 0.0
        for g in groups:
            offset += penalty
            for b in g:
                add_linear(b, -penalty)
            for i, a in enumerate(g):
                for b in g[i + 1:]:
                    add_quad(a, b, 2.0 * penalty)

        qubo = QuboModel.from_terms(m * m, linear, quadratic, offset)
        decoding = DecodingMap(
            scheme="one_hot",
            variables=[VariableRange(f"position_{t}", m, (t - 1) * m, m)
                       for t in range(1, n)],
            fixed={"position_0": 0},
            offset_contributions=[("exactly_one_penalty_constant",
                                   penalty * len(groups))],
        )
        return qubo, decoding

    def to_discrete_problem(self) -> DiscreteProblem:
        n = self.num_cities
        d = self.distances
        variables = [(f"position_{t}", n - 1) for t in range(1, n)]
        terms: list[tuple[float, list[tuple[str, int]]]] = []
        for v in range(1, n):
            terms.append((float(d[0, v]), [("position_1", v - 1)]))
            terms.append((float(d[v, 0]), [(f"position_{n - 1}", v - 1)]))
        for t in range(1, n - 1):
            for u in range(1, n):
                for v in range(1, n):
                    if u == v:
                        continue
                    terms.append((float(d[u, v]),
                                  [(f"position_{t}", u - 1),
                                   (f"position_{t + 1}", v - 1)]))
        groups = [[(f"position_{t}", v - 1) for t in range(1, n)]
                  for v in range(1, n)]
        return DiscreteProblem(variables, terms, groups)

    def decode_solution(self, bits: Sequence[int], decoding: DecodingMap) -> Solution:
        try:
            values, repaired = decoding.decode_bits(bits)
        except Exception as exc:
            raise UndecodableState(str(exc)) from exc
        return self.assignment_to_solution(values, repaired)

    def assignment_to_solution(self, values: Sequence[int | None], repaired: bool) -> Solution:
        """Positions 1..n-1 get cities 1..n-1; holes and duplicates are
        filled with the lowest-index city not used yet."""
        n = self.num_cities
        if len(values) != n - 1:
            raise UndecodableState(
                f"expected {n - 1} position values, got {len(values)}")
        tour = [0]
        used = {0}
        for value in values:
            city = None if value is None else value + 1
            if city is None or city in used or not 1 <= city < n:
                city = min(set(range(1, n)) - used)
                repaired = True
            tour.append(city)
            used.add(city)
        return Solution(objective=self.evaluate_objective(tour),
                        tour=tour, repaired=repaired)
