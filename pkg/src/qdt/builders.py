"""Builders pair a constructible component with its hyperparameters.

Nodes never instantiate optimizers, ansatz templates or mixers directly;
they pick a builder from the registry, query values for any unresolved
hyperparameters, and call ``build``.  Builders are value-like: ``set_value``
returns an updated copy and never mutates the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Callable

from .errors import UnboundHyperparameter, UnknownHyperparameter, ValueRejected


@dataclass(frozen=True)
class Hyperparameter:
    """Typed, testable value needed to instantiate a component.

    ``test`` is a pure predicate over one candidate value; ``test_message``
    is shown when it rejects.  With ``allow_multiple`` a list passes iff
    every element passes.
    """

    name: str
    type: str  # "int" | "float" | "string" | "choice"
    description: str | None = None
    options: tuple[str, ...] = ()
    default: Any = None
    test: Callable[[Any], bool] | None = None
    test_message: str = "value rejected"
    allow_multiple: bool = False

    def __post_init__(self):
        if self.type == "choice" and not self.options:
            raise ValueError(f"choice hyperparameter '{self.name}' needs options")
        if self.default is not None:
            problem = self.violation(self.default)
            if problem:
                raise ValueError(f"default for '{self.name}' invalid: {problem}")

    def violation(self, value: Any) -> str | None:
        """Reason the value is unacceptable, or None when it passes."""
        if self.allow_multiple and isinstance(value, (list, tuple)):
            if not value:
                return "list must not be empty"
            for item in value:
                problem = self._violation_single(item)
                if problem:
                    return problem
            return None
        return self._violation_single(value)

    def _violation_single(self, value: Any) -> str | None:
        if self.type == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                return "an integer is required"
        elif self.type == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return "a number is required"
        elif self.type == "string":
            if not isinstance(value, str):
                return "a string is required"
        elif self.type == "choice":
            if value not in self.options:
                return f"must be one of: {', '.join(self.options)}"
        if self.test is not None and not self.test(value):
            return self.test_message
        return None

    def parse(self, raw: str) -> Any:
        """Turn raw text into a candidate value (no validity check here)."""
        raw = raw.strip()
        if self.allow_multiple and "," in raw:
            return [self._parse_single(part) for part in raw.split(",")]
        return self._parse_single(raw)

    def _parse_single(self, raw: str) -> Any:
        raw = raw.strip()
        if self.type == "int":
            return int(raw)
        if self.type == "float":
            return float(raw)
        if self.type == "choice" and raw.isdigit():
            k = int(raw)
            if 1 <= k <= len(self.options):
                return self.options[k - 1]
        return raw


@dataclass(frozen=True)
class Builder:
    """Factory plus declared hyperparameters and currently bound values."""

    target_kind: str  # "optimizer" | "ansatz" | "mixer" | "generic"
    display_name: str
    hyperparameters: tuple[Hyperparameter, ...]
    factory: Callable[..., Any]
    bound_values: dict[str, Any] = field(default_factory=dict)

    def list_hyperparameters(self) -> list[Hyperparameter]:
        return list(self.hyperparameters)

    def hyperparameter(self, name: str) -> Hyperparameter:
        for hp in self.hyperparameters:
            if hp.name == name:
                return hp
        raise UnknownHyperparameter(
            f"'{self.display_name}' has no hyperparameter '{name}'")

    def set_value(self, name: str, value: Any) -> "Builder":
        hp = self.hyperparameter(name)
        problem = hp.violation(value)
        if problem:
            raise ValueRejected(f"{name}: {problem}")
        values = dict(self.bound_values)
        values[name] = value
        return replace(self, bound_values=values)

    def unresolved(self) -> list[Hyperparameter]:
        """Hyperparameters that are neither bound nor defaulted."""
        return [hp for hp in self.hyperparameters
                if hp.name not in self.bound_values and hp.default is None]

    def resolved_values(self) -> dict[str, Any]:
        missing = [hp.name for hp in self.unresolved()]
        if missing:
            raise UnboundHyperparameter(missing)
        values = {hp.name: hp.default for hp in self.hyperparameters
                  if hp.default is not None}
        values.update(self.bound_values)
        return values

    def build(self, **context) -> Any:
        """Instantiate the underlying component; the builder stays usable."""
        return self.factory(self.resolved_values(), **context)


_REGISTRY: list[Builder] = []


def register_builder(builder: Builder) -> Builder:
    _REGISTRY.append(builder)
    return builder


def discover(kind: str) -> list[Builder]:
    """All registered builders of a kind, in registration order."""
    _ensure_catalog()
    return [b for b in _REGISTRY if b.target_kind == kind]


def find_builder(kind: str, display_name: str) -> Builder:
    for b in discover(kind):
        if b.display_name == display_name:
            return b
    raise KeyError(f"no {kind} builder named '{display_name}'")


def _ensure_catalog():
    # registrations live next to the components; import them on first use
    from . import circuits, solvers  # noqa: F401
