"""Run loop and persistence.

A run executes nodes from the root until a final node (the forward pass),
collecting the per-node path_info.  The final node's execute returns the
raw result, which is then handed to every path node's interpret_result in
exact reverse order (the backward pass) so each can undo its own
transformation: decode bitstrings, correct offsets, attach statistics.
Afterwards all reproducibility artifacts land in output_dir/<run-id>/.
"""

from __future__ import annotations

import json
import random
import secrets
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .errors import (InterpretFailure, IoFailure, MalformedConfig,
                     NodeFailure, NodeRevisited, QueryAborted,
                     StepBudgetExceeded)
from .queries import AnswerSource, abort_query, ask

if TYPE_CHECKING:  # pragma: no cover
    from .nodes import Node

DEFAULT_STEP_BUDGET = 10_000

#: Keys with package-wide meaning; nodes may add new keys freely but these
#: are read by more than one node and must keep their documented types.
RESERVED_KEYS = (
    "problem_instance",  # OptimizationProblem written by the root node
    "formulation",       # chosen formulation name (str)
    "encoding",          # DecodingMap for the active QUBO
    "qubo",              # QuboModel
    "ising",             # IsingModel
    "num_qubits",        # int, set by the Ising conversion
    "solver",            # assembled Solver
    "backend",           # backend name (str)
)


class ProblemData:
    """Insertion-ordered key-value store carried through the forward pass.

    Keys are never deleted during a run; there deliberately is no deletion
    API, and the engine additionally rejects any node that shrinks the key
    set behind its back.
    """

    def __init__(self):
        self._entries: dict[str, Any] = {}

    def __getitem__(self, key: str) -> Any:
        return self._entries[key]

    def __setitem__(self, key: str, value: Any) -> None:
        self._entries[key] = value

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def get(self, key: str, default: Any = None) -> Any:
        return self._entries.get(key, default)

    def keys(self):
        return self._entries.keys()

    def items(self):
        return self._entries.items()


@dataclass
class SolverLimits:
    brute_force_max_vars: int = 22
    statevector_max_qubits: int = 16

    def __post_init__(self):
        if self.brute_force_max_vars < 1 or self.statevector_max_qubits < 1:
            raise MalformedConfig("solver limits must be at least 1")


@dataclass
class Config:
    automation: str = "interactive"
    output_dir: str = "./runs"
    seed: int | None = None
    tokens: dict[str, str] = field(default_factory=dict)
    solver_limits: SolverLimits = field(default_factory=SolverLimits)
    answers_file: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.automation not in ("interactive", "auto"):
            raise MalformedConfig(
                f"automation must be 'interactive' or 'auto', got {self.automation!r}")
        if self.seed is not None and (not isinstance(self.seed, int)
                                      or isinstance(self.seed, bool)
                                      or self.seed < 0):
            raise MalformedConfig("seed must be a non-negative integer")

    def to_json_dict(self) -> dict:
        """Serializable view; token values are redacted, never echoed."""
        out = dict(self.extra)
        out.update({
            "automation": self.automation,
            "output_dir": str(self.output_dir),
            "seed": self.seed,
            "tokens": {k: "***" for k in self.tokens},
            "solver_limits": {
                "brute_force_max_vars": self.solver_limits.brute_force_max_vars,
                "statevector_max_qubits": self.solver_limits.statevector_max_qubits,
            },
            "answers_file": self.answers_file,
        })
        return out


def load_config(path: str | Path | None) -> Config:
    """Defaults merged with the JSON file; unknown keys are preserved so
    they survive into run_config.json."""
    if path is None or not Path(path).exists():
        return Config()
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedConfig(f"cannot read {path}: {exc}") from exc
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> Config:
    if not isinstance(raw, dict):
        raise MalformedConfig("configuration must be a JSON object")
    known = {"automation", "output_dir", "seed", "tokens", "solver_limits",
             "answers_file"}
    extra = {k: v for k, v in raw.items() if k not in known}
    limits_raw = raw.get("solver_limits", {})
    if not isinstance(limits_raw, dict):
        raise MalformedConfig("solver_limits must be an object")
    tokens = raw.get("tokens", {})
    if not isinstance(tokens, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in tokens.items()):
        raise MalformedConfig("tokens must map provider names to strings")
    try:
        limits = SolverLimits(
            brute_force_max_vars=int(limits_raw.get("brute_force_max_vars", 22)),
            statevector_max_qubits=int(limits_raw.get("statevector_max_qubits", 16)),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedConfig(f"bad solver_limits: {exc}") from exc
    output_dir = raw.get("output_dir", "./runs")
    if not isinstance(output_dir, str):
        raise MalformedConfig("output_dir must be a string")
    answers_file = raw.get("answers_file")
    if answers_file is not None and not isinstance(answers_file, str):
        raise MalformedConfig("answers_file must be a string")
    return Config(
        automation=raw.get("automation", "interactive"),
        output_dir=output_dir,
        seed=raw.get("seed"),
        tokens=dict(tokens),
        solver_limits=limits,
        answers_file=answers_file,
        extra=extra,
    )


@dataclass
class RunArtifacts:
    run_id: str
    run_dir: Path | None
    result: dict
    path: list[str]
    files_written: list[str] = field(default_factory=list)


# --- serialization ---

def to_jsonable(value: Any) -> Any:
    """JSON-ready view of any problem-data value.

    Containers recurse; models serialize as dense lists via to_json_dict;
    anything opaque (circuits, solvers...) becomes a one-line placeholder
    so the debug dump stays valid JSON.
    """
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if hasattr(value, "item") and not hasattr(value, "__len__"):
        return value.item()  # numpy scalar
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "to_json_dict"):
        return to_jsonable(value.to_json_dict())
    if hasattr(value, "to_record"):
        return to_jsonable(value.to_record())
    if hasattr(value, "describe"):
        return {"__opaque__": value.describe()}
    return {"__opaque__": type(value).__name__}


def canonical_json(value: Any) -> str:
    """Sorted keys, two-space indent, shortest-round-trip floats."""
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2) + "\n"


def _make_run_id(output_dir: Path, seed: int | None) -> str:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S")
    if seed is not None:
        suffix = f"{random.Random(seed).getrandbits(16):04x}"
    else:
        suffix = secrets.token_hex(2)
    base = f"{stamp}-{suffix}"
    candidate, k = base, 1
    while (output_dir / candidate).exists():
        candidate = f"{base}-{k}"
        k += 1
    return candidate


# --- passes ---

def _execute_with_recovery(node: "Node", problem_data: ProblemData,
                           config: Config, source: AnswerSource):
    """Run one node; on failure interactive users may retry, everyone else
    aborts with the failure attached."""
    while True:
        try:
            return node.execute(problem_data, config, source)
        except QueryAborted:
            raise
        except Exception as exc:
            if source.interactive:
                choice = ask(abort_query(
                    f"{node.id}.failure",
                    f"node '{node.id}' failed: {exc}. Abort or retry?"), source)
                if choice.value == "retry":
                    continue
            raise NodeFailure(node.id, exc) from exc


def backward_pass(path: list[tuple["Node", Any]], raw_result: dict,
                  problem_data: ProblemData, config: Config) -> dict:
    """Invoke interpret_result exactly once per node, last node first."""
    result = raw_result
    for node, path_info in reversed(path):
        try:
            out = node.interpret_result(result, problem_data, config, path_info)
        except Exception as exc:
            raise InterpretFailure(node.id, exc) from exc
        if out is not None:
            result = out
    return result


def run_tree(config: Config, answer_source: AnswerSource,
             root: "Node | None" = None,
             step_budget: int = DEFAULT_STEP_BUDGET,
             observer=None) -> RunArtifacts:
    """Execute the full forward pass, backward pass and persistence.

    ``observer``, when given, is called with each node id right after that
    node finishes executing (used for live progress reporting).
    """
    if root is None:
        from .nodes import load_problem_node
        root = load_problem_node()

    run_dir = Path(config.output_dir)
    run_id = _make_run_id(run_dir, config.seed)
    problem_data = ProblemData()
    path: list[tuple["Node", Any]] = []
    visited: list[str] = []

    node: "Node | None" = root
    raw_result = None
    try:
        while node is not None:
            if node.id in visited:
                raise NodeRevisited(
                    f"node '{node.id}' already executed; path so far: {visited}")
            if len(visited) >= step_budget:
                raise StepBudgetExceeded(
                    f"run exceeded {step_budget} node executions")
            keys_before = set(problem_data.keys())
            outcome = _execute_with_recovery(node, problem_data, config,
                                             answer_source)
            removed = keys_before - set(problem_data.keys())
            if removed:
                raise NodeFailure(node.id, KeyError(
                    f"node removed problem-data keys {sorted(removed)}"))
            visited.append(node.id)
            if observer is not None:
                observer(node.id)
            if node.is_final:
                raw_result = outcome
                path.append((node, {}))
                break
            path.append((node, outcome))
            node = node.next_node(outcome)
    except QueryAborted:
        raise  # user abort: no artifacts at all
    except (NodeFailure, NodeRevisited, StepBudgetExceeded):
        _persist_debug_data(run_dir / run_id, problem_data)
        raise

    result = backward_pass(path, raw_result, problem_data, config)

    record = dict(result)
    record["run_id"] = run_id
    record["timestamp"] = datetime.now(timezone.utc).isoformat()
    record["path"] = visited
    if "stats" in record:
        record["solver_stats"] = record.pop("stats")

    files = persist_artifacts(run_dir / run_id, record, problem_data, config)
    return RunArtifacts(run_id=run_id, run_dir=run_dir / run_id,
                        result=record, path=visited, files_written=files)


def _persist_debug_data(run_dir: Path, problem_data: ProblemData) -> None:
    """Best-effort partial dump after a failed forward pass."""
    try:
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "problem_data.json").write_text(
            canonical_json(dict(problem_data.items())))
    except OSError:
        pass


def persist_artifacts(run_dir: Path, record: dict, problem_data: ProblemData,
                      config: Config) -> list[str]:
    """Write result.json, run_config.json, problem_data.json and, when the
    instance was generated on the fly, problem_instance.json."""
    files: list[str] = []
    try:
        run_dir.mkdir(parents=True, exist_ok=True)

        result_path = run_dir / "result.json"
        result_path.write_text(canonical_json(record))
        files.append(str(result_path))

        instance = problem_data.get("problem_instance")
        if problem_data.get("instance_generated") and hasattr(instance, "to_record"):
            instance_path = run_dir / "problem_instance.json"
            instance_path.write_text(canonical_json(instance.to_record()))
            files.append(str(instance_path))

        config_path = run_dir / "run_config.json"
        config_path.write_text(canonical_json(config.to_json_dict()))
        files.append(str(config_path))

        data_path = run_dir / "problem_data.json"
        data_path.write_text(canonical_json(dict(problem_data.items())))
        files.append(str(data_path))
    except OSError as exc:
        raise IoFailure(f"cannot write artifacts to {run_dir}: {exc}") from exc
    return files
