"""Typed user-input primitives.

Every interaction with a human (or a script standing in for one) goes
through a Query: it renders a prompt, validates raw text, falls back to a
default on empty input, and honors the convention that typing "exit"
aborts the whole run.  Query trees chain queries with guards on earlier
answers, so only the relevant ones are asked.
"""

from __future__ import annotations

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable

from .builders import Hyperparameter
from .errors import InvalidScriptedAnswer, NoAnswerAvailable, QueryAborted

EXIT_WORD = "exit"

KINDS = ("multi_choice", "string", "path", "int", "float", "hyperparam", "abort")


@dataclass(frozen=True)
class Query:
    id: str
    prompt: str
    kind: str
    default: Any = None
    options: tuple[str, ...] = ()
    must_exist: bool = False
    minimum: float | None = None
    maximum: float | None = None
    exclusive_minimum: bool = False
    hyperparameter: Hyperparameter | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown query kind '{self.kind}'")
        if self.kind in ("multi_choice", "abort") and not self.options:
            raise ValueError(f"query '{self.id}' needs options")
        if self.kind == "hyperparam" and self.hyperparameter is None:
            raise ValueError(f"query '{self.id}' needs a hyperparameter")
        if self.default is not None:
            if self.kind == "hyperparam":
                problem = self.hyperparameter.violation(self.default)
            else:
                _, problem = validate(self, str(self.default))
            if problem:
                raise ValueError(
                    f"default {self.default!r} of '{self.id}' is invalid: {problem}")

    def render(self, violation: str | None = None) -> str:
        """Terminal prompt; exact wording is presentation, not contract."""
        lines = []
        if violation:
            lines.append(f"  ! {violation}")
        lines.append(self.prompt)
        for k, option in enumerate(self.options, start=1):
            lines.append(f"  {k}) {option}")
        suffix = f" [{self.default}]" if self.default is not None else ""
        lines.append(f"> {suffix}" if suffix else "> ")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        out = {"id": self.id, "prompt": self.prompt, "kind": self.kind}
        if self.default is not None:
            out["default"] = self.default
        if self.options:
            out["options"] = list(self.options)
        if self.minimum is not None:
            out["minimum"] = self.minimum
        if self.maximum is not None:
            out["maximum"] = self.maximum
        return out


@dataclass(frozen=True)
class Answer:
    query_id: str
    value: Any
    source: str  # "user" | "default" | "scripted" | "auto"


def validate(query: Query, raw: str) -> tuple[Any, str | None]:
    """Parse and check raw text; returns (value, None) or (None, violation).

    Never raises: a violation is an ordinary outcome that triggers a
    re-prompt or, for non-interactive sources, a scripted-answer error.
    """
    raw = raw.strip()
    if raw == "":
        return None, "a value is required"

    if query.kind in ("multi_choice", "abort"):
        if raw in query.options:
            return raw, None
        if raw.isdigit():
            k = int(raw)
            if 1 <= k <= len(query.options):
                return query.options[k - 1], None
        return None, f"pick 1-{len(query.options)} or one of: {', '.join(query.options)}"

    if query.kind == "string":
        return raw, None

    if query.kind == "path":
        if query.must_exist and not os.path.exists(raw):
            return None, f"no such file: {raw}"
        return raw, None

    if query.kind in ("int", "float"):
        try:
            value = int(raw) if query.kind == "int" else float(raw)
        except ValueError:
            return None, f"not a valid {query.kind}"
        if query.minimum is not None:
            if query.exclusive_minimum and value <= query.minimum:
                return None, f"must be > {query.minimum}"
            if not query.exclusive_minimum and value < query.minimum:
                return None, f"must be >= {query.minimum}"
        if query.maximum is not None and value > query.maximum:
            return None, f"must be <= {query.maximum}"
        return value, None

    # hyperparam: delegate parsing and testing to the descriptor
    hp = query.hyperparameter
    try:
        value = hp.parse(raw)
    except ValueError:
        return None, f"not a valid {hp.type}"
    problem = hp.violation(value)
    if problem:
        return None, problem
    return value, None


class AnswerSource(ABC):
    """Supplies raw answer text; None means "use the query's default"."""

    mode: str = "user"
    interactive: bool = False

    @abstractmethod
    def fetch(self, query: Query, violation: str | None) -> str | None:
        ...


class InteractiveSource(AnswerSource):
    """Reads stdin; invalid input re-prompts with the violation shown."""

    mode = "user"
    interactive = True

    def __init__(self, input_fn: Callable[[str], str] = input,
                 echo: Callable[[str], None] = print):
        self.input_fn = input_fn
        self.echo = echo

    def fetch(self, query: Query, violation: str | None) -> str | None:
        text = self.input_fn(query.render(violation))
        return text


class ScriptedSource(AnswerSource):
    """Answers keyed by query id; missing keys fall back to defaults."""

    mode = "scripted"
    interactive = False

    def __init__(self, answers: dict[str, str]):
        self.answers = dict(answers)

    def fetch(self, query: Query, violation: str | None) -> str | None:
        if query.id not in self.answers:
            return None
        return str(self.answers[query.id])


class AutoSource(AnswerSource):
    """Fully automated: always takes the recommendation (the default)."""

    mode = "auto"
    interactive = False

    def fetch(self, query: Query, violation: str | None) -> str | None:
        return None


def ask(query: Query, source: AnswerSource) -> Answer:
    """One complete query round: fetch, default fallback, validate, retry.

    The literal answer "exit" aborts the run.  Interactive sources are
    re-asked on invalid input; scripted and automated sources fail fast.
    """
    violation: str | None = None
    while True:
        raw = source.fetch(query, violation)
        if raw is None or raw.strip() == "":
            if query.default is not None:
                taken = "auto" if source.mode == "auto" else "default"
                return Answer(query.id, query.default, taken)
            if raw is None:
                raise NoAnswerAvailable(
                    f"query '{query.id}' has no default and no answer")
            violation = "a value is required"
            if not source.interactive:
                raise InvalidScriptedAnswer(f"{query.id}: {violation}")
            continue
        if raw.strip() == EXIT_WORD:
            raise QueryAborted(f"aborted at query '{query.id}'")
        value, violation = validate(query, raw)
        if violation is None:
            return Answer(query.id, value, source.mode)
        if not source.interactive:
            raise InvalidScriptedAnswer(f"{query.id}: {violation}")


@dataclass(frozen=True)
class TreeItem:
    """One query in a tree; the query may be built from earlier answers."""

    query_id: str
    make: Callable[[dict[str, Any]], Query]
    depends_on: tuple[str, ...] = ()
    guard: Callable[[dict[str, Any]], bool] | None = None

    @classmethod
    def fixed(cls, query: Query, depends_on: tuple[str, ...] = (),
              guard=None) -> "TreeItem":
        return cls(query.id, lambda values: query, depends_on, guard)


@dataclass
class QueryTree:
    """Queries in ask order with guards over already-collected answers."""

    items: list[TreeItem] = field(default_factory=list)

    def __post_init__(self):
        seen: set[str] = set()
        for item in self.items:
            if item.query_id in seen:
                raise ValueError(f"duplicate query id '{item.query_id}'")
            unknown = set(item.depends_on) - seen
            if unknown:
                raise ValueError(
                    f"guard of '{item.query_id}' references later or unknown "
                    f"queries: {sorted(unknown)}")
            seen.add(item.query_id)


def run_query_tree(tree: QueryTree, source: AnswerSource) -> dict[str, Answer]:
    """Ask in order, skipping queries whose guard is false; skipped queries
    do not appear in the answer map."""
    answers: dict[str, Answer] = {}
    values: dict[str, Any] = {}
    for item in tree.items:
        if item.guard is not None and not item.guard(values):
            continue
        query = item.make(values)
        if query.id != item.query_id:
            raise ValueError(
                f"tree item '{item.query_id}' built query '{query.id}'")
        answer = ask(query, source)
        answers[query.id] = answer
        values[query.id] = answer.value
    return answers


def abort_query(query_id: str, prompt: str) -> Query:
    """The retry-or-abort question shown after a node failure."""
    return Query(id=query_id, prompt=prompt, kind="abort",
                 options=("abort", "retry"), default="abort")
