"""The node catalog wired into the decision graph.

Each node does exactly one job.  ``execute`` queries the user where
needed and grows the shared problem data; ``next_node`` routes on the
node's local path_info; ``interpret_result`` (optional) undoes the node's
transformation on the way back: extracting bitstrings, decoding them into
application solutions, attaching statistics.

Routing:

    load_problem -> formulation_select
        direct formulation ------------------> algorithm_select
        discrete formulation -> encoding_select -> algorithm_select
    algorithm_select
        brute_force / tabu --> solver_setup --> algorithm_execute
        qaoa -> ising_conversion -> select_layers -> load_or_generate_mixer
                [-> select_mixer] -> select_optimizer -> solver_setup
                -> backend_select -> algorithm_execute
        vqe  -> ising_conversion -> select_ansatz -> select_optimizer
                -> solver_setup -> backend_select -> algorithm_execute

A node never removes problem-data keys, and no path revisits a node.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

from . import problems
from .builders import discover, find_builder
from .circuits import Circuit, parse_qasm3_mixer
from .encodings import binary_encode, one_hot_encode, qubo_to_ising, spins_to_bits
from .engine import Config, ProblemData
from .queries import (AnswerSource, Query, QueryTree, TreeItem, ask,
                      run_query_tree)
from .solvers import (BruteForceSolver, QaoaSolver, TabuSolver, VqeSolver,
                      check_input)

#: Hardware access is token-gated; nothing beyond the gate ships here.
HARDWARE_PROVIDERS = ("remote_qpu",)
_LOCKED_SUFFIX = " (locked: access token required)"


class Node(ABC):
    """One task of the decision graph."""

    id: str = ""
    is_final: bool = False

    @abstractmethod
    def execute(self, problem_data: ProblemData, config: Config,
                answer_source: AnswerSource) -> Any:
        """Perform the task; returns path_info (or, for the final node,
        the raw result)."""

    def next_node(self, path_info: dict) -> "Node | None":
        return None

    def interpret_result(self, result: dict, problem_data: ProblemData,
                         config: Config, path_info: dict) -> dict:
        return result


def _derive_seed(config: Config) -> int:
    if config.seed is not None:
        return config.seed
    import secrets
    return secrets.randbits(32)


class LoadProblemNode(Node):
    """Root: load an instance from JSON or generate one at random."""

    id = "load_problem"

    def execute(self, problem_data, config, answer_source):
        classes = problems.available_problem_classes()
        tree = QueryTree([
            TreeItem.fixed(Query(
                id="load_problem.source",
                prompt="Load a problem instance from a file, or generate one?",
                kind="multi_choice", options=("generate", "load"),
                default="generate")),
            TreeItem.fixed(Query(
                id="load_problem.path",
                prompt="Path of the instance JSON file:",
                kind="path", must_exist=True),
                depends_on=("load_problem.source",),
                guard=lambda v: v["load_problem.source"] == "load"),
            TreeItem.fixed(Query(
                id="load_problem.class",
                prompt="Problem class to generate:",
                kind="multi_choice", options=tuple(classes), default="maxcut"),
                depends_on=("load_problem.source",),
                guard=lambda v: v["load_problem.source"] == "generate"),
            TreeItem(
                query_id="load_problem.size",
                make=lambda v: Query(
                    id="load_problem.size",
                    prompt="Problem size (number of cities / nodes):",
                    kind="int", default=8,
                    minimum=problems.get_problem_class(
                        v["load_problem.class"]).min_size),
                depends_on=("load_problem.source", "load_problem.class"),
                guard=lambda v: v["load_problem.source"] == "generate"),
        ])
        answers = run_query_tree(tree, answer_source)

        if answers["load_problem.source"].value == "load":
            record = json.loads(Path(answers["load_problem.path"].value).read_text())
            instance = problems.from_record(record)
            problem_data["instance_generated"] = False
        else:
            seed = _derive_seed(config)
            instance = problems.create_random_instance(
                answers["load_problem.class"].value,
                answers["load_problem.size"].value, seed)
            problem_data["instance_generated"] = True
            problem_data["instance_seed"] = seed
        problem_data["problem_instance"] = instance
        return {"instance": instance}

    def next_node(self, path_info):
        return FormulationSelectNode()

    def interpret_result(self, result, problem_data, config, path_info):
        # last backward step: pin the application-level objective
        instance = path_info["instance"]
        result["problem_class"] = instance.problem_class
        if "solution" in result:
            result["objective"] = instance.evaluate_objective(result["solution"])
        if instance.metadata:
            result["metadata"] = dict(instance.metadata)
        return result


class FormulationSelectNode(Node):
    """Choose between the class's direct formulations and the generic
    discrete route; on the backward pass, decode bits into a Solution."""

    id = "formulation_select"

    def execute(self, problem_data, config, answer_source):
        instance = problem_data["problem_instance"]
        options = instance.formulation_options
        answer = ask(Query(
            id="formulation.choice",
            prompt=f"Formulation for this {instance.problem_class} instance:",
            kind="multi_choice", options=tuple(options), default=options[0]),
            answer_source)
        choice = answer.value
        problem_data["formulation"] = choice
        if choice == "discrete":
            problem_data["discrete_problem"] = instance.to_discrete_problem()
            return {"route": "discrete"}
        encoding_name = choice.removesuffix("-direct")
        qubo, decoding = instance.formulate_problem(encoding_name)
        problem_data["qubo"] = qubo
        problem_data["encoding"] = decoding
        return {"route": "direct", "decoding": decoding}

    def next_node(self, path_info):
        if path_info["route"] == "discrete":
            return EncodingSelectNode()
        return AlgorithmSelectNode()

    def interpret_result(self, result, problem_data, config, path_info):
        instance = problem_data["problem_instance"]
        if path_info["route"] == "direct":
            solution = instance.decode_solution(result["best_bits"],
                                                path_info["decoding"])
        else:
            solution = instance.assignment_to_solution(
                result["assignment_values"],
                result.get("assignment_repaired", False))
        result["raw_energy"] = result["best_energy"]
        result["solution"] = solution.payload()
        result["objective"] = solution.objective
        result["repaired"] = solution.repaired
        return result


class EncodingSelectNode(Node):
    """Encode the discrete form as a QUBO (one-hot, or binary when the
    constraints allow it); decodes bits back to values on the way up."""

    id = "encoding_select"

    @staticmethod
    def _binary_possible(dp) -> bool:
        domains = dict(dp.variables)
        for group in dp.constraint_groups:
            touched = {var for var, _ in group}
            if len(touched) > 1:
                return False
            name = next(iter(touched))
            if {val for _, val in group} != set(range(domains[name])):
                return False
        return True

    def execute(self, problem_data, config, answer_source):
        dp = problem_data["discrete_problem"]
        instance = problem_data["problem_instance"]
        options = ["one-hot"] + (["binary"] if self._binary_possible(dp) else [])
        answer = ask(Query(
            id="encoding.choice",
            prompt="Encoding of the discrete variables:",
            kind="multi_choice", options=tuple(options), default="one-hot"),
            answer_source)
        if answer.value == "one-hot":
            penalty = ask(Query(
                id="encoding.penalty",
                prompt="Penalty weight for the exactly-one constraints:",
                kind="float", minimum=0.0, exclusive_minimum=True,
                default=instance.recommended_penalty()), answer_source)
            qubo, decoding = one_hot_encode(dp, penalty.value)
        else:
            qubo, decoding = binary_encode(dp)
        problem_data["encoding_choice"] = answer.value
        problem_data["qubo"] = qubo
        problem_data["encoding"] = decoding
        return {"decoding": decoding}

    def next_node(self, path_info):
        return AlgorithmSelectNode()

    def interpret_result(self, result, problem_data, config, path_info):
        values, repaired = path_info["decoding"].decode_bits(result["best_bits"])
        result["assignment_values"] = values
        result["assignment_repaired"] = repaired
        result["repaired"] = repaired
        return result


class AlgorithmSelectNode(Node):
    """Pick the solving algorithm; the recommendation is exhaustive search
    whenever it is affordable, the classical tabu baseline otherwise."""

    id = "algorithm_select"

    def execute(self, problem_data, config, answer_source):
        qubo = problem_data["qubo"]
        affordable = qubo.num_vars <= config.solver_limits.brute_force_max_vars
        answer = ask(Query(
            id="algorithm.choice",
            prompt=f"Algorithm for the {qubo.num_vars}-variable model:",
            kind="multi_choice",
            options=("brute_force", "tabu", "qaoa", "vqe"),
            default="brute_force" if affordable else "tabu"), answer_source)
        problem_data["algorithm"] = answer.value
        return {"algorithm": answer.value}

    def next_node(self, path_info):
        if path_info["algorithm"] in ("qaoa", "vqe"):
            return IsingConversionNode()
        return SolverSetupNode()


class IsingConversionNode(Node):
    """QUBO to Ising for the variational branch; exact energy equivalence,
    with the moved constant recorded."""

    id = "ising_conversion"

    def execute(self, problem_data, config, answer_source):
        qubo = problem_data["qubo"]
        ising = qubo_to_ising(qubo)
        problem_data["ising"] = ising
        problem_data["num_qubits"] = qubo.num_vars
        problem_data["ising_conversion_offset"] = ising.offset - qubo.offset
        return {"algorithm": problem_data["algorithm"],
                "offset": ising.offset - qubo.offset}

    def next_node(self, path_info):
        if path_info["algorithm"] == "qaoa":
            return SelectLayersNode()
        return SelectAnsatzNode()

    def interpret_result(self, result, problem_data, config, path_info):
        if "spins" in result and "best_bits" not in result:
            result["best_bits"] = spins_to_bits(result["spins"])
        return result


class SelectLayersNode(Node):
    id = "select_layers"

    def execute(self, problem_data, config, answer_source):
        answer = ask(Query(
            id="qaoa.layers",
            prompt="Number of alternating layers p:",
            kind="int", minimum=1, default=1), answer_source)
        problem_data["qaoa_p"] = answer.value
        return {}

    def next_node(self, path_info):
        return LoadOrGenerateMixerNode()


class LoadOrGenerateMixerNode(Node):
    """Mixer block, step one: take a user file or hand over to templates."""

    id = "load_or_generate_mixer"

    def execute(self, problem_data, config, answer_source):
        answer = ask(Query(
            id="mixer.source",
            prompt="Generate the mixer from a template, or load a qasm3 file?",
            kind="multi_choice", options=("generate", "load"),
            default="generate"), answer_source)
        if answer.value == "generate":
            return {"route": "generate"}
        path = ask(Query(
            id="mixer.path",
            prompt="Path of the mixer qasm3 file:",
            kind="path", must_exist=True), answer_source)
        mixer = parse_qasm3_mixer(Path(path.value).read_text())
        needed = problem_data["num_qubits"]
        if mixer.num_qubits != needed:
            raise ValueError(
                f"mixer file declares {mixer.num_qubits} qubits, "
                f"the model needs {needed}")
        problem_data["mixer"] = mixer
        problem_data["mixer_source"] = "load"
        return {"route": "load"}

    def next_node(self, path_info):
        if path_info["route"] == "generate":
            return SelectMixerNode()
        return SelectOptimizerNode()


class SelectMixerNode(Node):
    """Mixer block, step two: build a template mixer for the model size."""

    id = "select_mixer"

    def execute(self, problem_data, config, answer_source):
        builders = discover("mixer")
        names = tuple(b.display_name for b in builders)
        answer = ask(Query(
            id="mixer.template",
            prompt="Mixer template:",
            kind="multi_choice", options=names, default=names[0]), answer_source)
        builder = find_builder("mixer", answer.value)
        problem_data["mixer"] = builder.build(num_qubits=problem_data["num_qubits"])
        problem_data["mixer_source"] = "template:" + answer.value
        return {}

    def next_node(self, path_info):
        return SelectOptimizerNode()


def _query_hyperparameters(builder, prefix, answer_source):
    for hp in builder.list_hyperparameters():
        if hp.name in builder.bound_values:
            continue
        prompt = f"{hp.name}"
        if hp.description:
            prompt += f" ({hp.description})"
        answer = ask(Query(
            id=f"{prefix}.{hp.name}", prompt=prompt + ":",
            kind="hyperparam", hyperparameter=hp, default=hp.default),
            answer_source)
        builder = builder.set_value(hp.name, answer.value)
    return builder


class SelectAnsatzNode(Node):
    id = "select_ansatz"

    def execute(self, problem_data, config, answer_source):
        builders = discover("ansatz")
        names = tuple(b.display_name for b in builders)
        answer = ask(Query(
            id="ansatz.choice",
            prompt="Variational ansatz template:",
            kind="multi_choice", options=names, default=names[0]), answer_source)
        builder = find_builder("ansatz", answer.value)
        builder = _query_hyperparameters(builder, "ansatz", answer_source)
        problem_data["ansatz"] = builder.build(
            num_qubits=problem_data["num_qubits"])
        return {}

    def next_node(self, path_info):
        return SelectOptimizerNode()


class SelectOptimizerNode(Node):
    id = "select_optimizer"

    def execute(self, problem_data, config, answer_source):
        builders = discover("optimizer")
        names = tuple(b.display_name for b in builders)
        answer = ask(Query(
            id="optimizer.choice",
            prompt="Classical optimizer:",
            kind="multi_choice", options=names, default=names[0]), answer_source)
        builder = find_builder("optimizer", answer.value)
        builder = _query_hyperparameters(builder, "optimizer", answer_source)
        problem_data["optimizer"] = builder.build()
        problem_data["optimizer_name"] = answer.value
        return {}

    def next_node(self, path_info):
        return SolverSetupNode()


class SolverSetupNode(Node):
    """Assemble the solver object and verify the problem data is ready."""

    id = "solver_setup"

    def execute(self, problem_data, config, answer_source):
        algorithm = problem_data["algorithm"]
        seed = _derive_seed(config)
        if algorithm == "brute_force":
            solver = BruteForceSolver(
                max_vars=config.solver_limits.brute_force_max_vars)
        elif algorithm == "tabu":
            solver = TabuSolver(seed=seed)
        elif algorithm == "qaoa":
            solver = QaoaSolver(
                mixer=problem_data["mixer"], p=problem_data["qaoa_p"],
                optimizer=problem_data["optimizer"], seed=seed,
                max_qubits=config.solver_limits.statevector_max_qubits)
        elif algorithm == "vqe":
            solver = VqeSolver(
                ansatz=problem_data["ansatz"],
                optimizer=problem_data["optimizer"], seed=seed,
                max_qubits=config.solver_limits.statevector_max_qubits)
        else:
            raise ValueError(f"unknown algorithm '{algorithm}'")
        if not check_input(solver, problem_data):
            raise RuntimeError(
                f"problem data is not ready for solver '{solver.name}'")
        problem_data["solver"] = solver
        return {"algorithm": algorithm, "solver_name": solver.name}

    def next_node(self, path_info):
        if path_info["algorithm"] in ("qaoa", "vqe"):
            return BackendSelectNode()
        return AlgorithmExecuteNode()

    def interpret_result(self, result, problem_data, config, path_info):
        result["solver_name"] = path_info["solver_name"]
        circuit = result.get("best_circuit")
        if isinstance(circuit, Circuit):
            result["best_circuit"] = str(circuit)
        return result


class BackendSelectNode(Node):
    """Circuit execution backend.  Hardware providers appear in the list
    but stay locked until the configuration carries their access token;
    nothing beyond the gating mechanism ships here."""

    id = "backend_select"

    def execute(self, problem_data, config, answer_source):
        options = ["statevector"]
        for provider in HARDWARE_PROVIDERS:
            if config.tokens.get(provider):
                options.append(provider)
            else:
                options.append(provider + _LOCKED_SUFFIX)
        violation = None
        while True:
            answer = ask(Query(
                id="backend.choice",
                prompt="Execution backend:" if violation is None else violation,
                kind="multi_choice", options=tuple(options),
                default="statevector"), answer_source)
            if answer.value.endswith(_LOCKED_SUFFIX):
                violation = ("That backend needs an access token in the "
                             "configuration. Execution backend:")
                if not answer_source.interactive:
                    raise RuntimeError(
                        f"backend '{answer.value}' requires an access token")
                continue
            break
        if answer.value != "statevector":
            raise RuntimeError(
                f"backend '{answer.value}' is token-gated but no provider "
                "integration is installed in this build")
        problem_data["backend"] = answer.value
        return {}

    def next_node(self, path_info):
        return AlgorithmExecuteNode()


class AlgorithmExecuteNode(Node):
    """Final node: run the assembled solver and return its raw result."""

    id = "algorithm_execute"
    is_final = True

    def execute(self, problem_data, config, answer_source):
        solver = problem_data["solver"]
        solver_result = solver.solve(problem_data)
        problem_data["solver_finished"] = True
        return solver_result.to_result_dict()


def load_problem_node() -> Node:
    """Fresh root node for one run."""
    return LoadProblemNode()


ALL_NODE_IDS = (
    "load_problem", "formulation_select", "encoding_select",
    "algorithm_select", "ising_conversion", "select_layers",
    "load_or_generate_mixer", "select_mixer", "select_ansatz",
    "select_optimizer", "solver_setup", "backend_select",
    "algorithm_execute",
)
