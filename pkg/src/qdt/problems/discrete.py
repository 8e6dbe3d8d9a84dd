"""Generic finite-domain intermediate form.

A discrete problem is a list of named variables with finite domains, a
minimization objective of degree at most two over indicator predicates
``[variable == value]``, and a set of exactly-one constraint groups over
such indicators.  It is the slow-but-general route into binary encodings.
"""

from __future__ import annotations

from dataclasses import dataclass, field


Indicator = tuple[str, int]


@dataclass
class DiscreteProblem:
    variables: list[tuple[str, int]]
    objective_terms: list[tuple[float, list[Indicator]]] = field(default_factory=list)
    constraint_groups: list[list[Indicator]] = field(default_factory=list)

    def __post_init__(self):
        domains = dict(self.variables)
        if len(domains) != len(self.variables):
            raise ValueError("duplicate variable names")
        for name, size in self.variables:
            if size < 2:
                raise ValueError(f"variable '{name}' needs a domain of at least 2")
        for coeff, indicators in self.objective_terms:
            if len(indicators) > 2:
                raise ValueError("objective terms may touch at most two indicators")
            for var, val in indicators:
                self._check_indicator(domains, var, val)
        for group in self.constraint_groups:
            if not group:
                raise ValueError("constraint groups must be non-empty")
            for var, val in group:
                self._check_indicator(domains, var, val)

    @staticmethod
    def _check_indicator(domains, var, val):
        if var not in domains:
            raise ValueError(f"unknown variable '{var}'")
        if not 0 <= val < domains[var]:
            raise ValueError(f"value {val} outside domain of '{var}'")

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.variables]

    def evaluate(self, assignment: dict[str, int]) -> float:
        """Objective value of a full assignment (feasible or not)."""
        total = 0.0
        for coeff, indicators in self.objective_terms:
            if all(assignment[var] == val for var, val in indicators):
                total += coeff
        return total

    def is_feasible(self, assignment: dict[str, int]) -> bool:
        """True when every exactly-one group has exactly one holding indicator."""
        for group in self.constraint_groups:
            hits = sum(1 for var, val in group if assignment[var] == val)
            if hits != 1:
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "variables": [[name, size] for name, size in self.variables],
            "objective_terms": [
                [coeff, [[var, val] for var, val in indicators]]
                for coeff, indicators in self.objective_terms
            ],
            "constraint_groups": [
                [[var, val] for var, val in group] for group in self.constraint_groups
            ],
        }
