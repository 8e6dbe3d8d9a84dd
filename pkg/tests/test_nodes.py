import json

import pytest

from qdt import problems
from qdt.circuits import render_qasm3, build_mixer
from qdt.engine import Config, ProblemData, run_tree
from qdt.errors import NodeFailure
from qdt.nodes import (ALL_NODE_IDS, AlgorithmSelectNode, BackendSelectNode,
                       load_problem_node)
from qdt.queries import AutoSource, ScriptedSource

from conftest import K3_RECORD, best_cut_slow, best_tour_slow


def run_scripted(tmp_path, answers, seed=0, tokens=None):
    config = Config(output_dir=str(tmp_path / "runs"), seed=seed,
                    tokens=tokens or {})
    return run_tree(config, ScriptedSource(answers), root=load_problem_node())


# --- end-to-end catalog paths ---

def test_k3_auto_brute_force_path(tmp_path, k3_file):
    artifacts = run_scripted(tmp_path, {
        "load_problem.source": "load",
        "load_problem.path": str(k3_file),
    })
    result = artifacts.result
    assert result["problem_class"] == "maxcut"
    assert result["solver_name"] == "brute_force"
    assert result["objective"] == 2.0  # best cut of a triangle
    assert result["raw_energy"] == -2.0
    assert sorted(result["solution"]) in ([0, 0, 1], [0, 1, 1])


def test_generated_maxcut_matches_exhaustive_oracle(tmp_path):
    artifacts = run_scripted(tmp_path, {
        "load_problem.size": "7",
    }, seed=5)
    inst = problems.MaxCutInstance.create_random_instance(7, seed=5)
    expected, _ = best_cut_slow(inst.num_nodes, inst.edges)
    assert artifacts.result["objective"] == expected


def test_tsp_one_hot_direct_path(tmp_path):
    artifacts = run_scripted(tmp_path, {
        "load_problem.class": "tsp",
        "load_problem.size": "4",
    }, seed=2)
    inst = problems.TspInstance.create_random_instance(4, seed=2)
    expected_length, _ = best_tour_slow(inst.distances.tolist())
    result = artifacts.result
    assert result["path"] == ["load_problem", "formulation_select",
                              "algorithm_select", "solver_setup",
                              "algorithm_execute"]
    assert result["objective"] == pytest.approx(expected_length)
    assert result["solution"][0] == 0
    assert result["repaired"] is False


def test_tsp_discrete_route(tmp_path):
    artifacts = run_scripted(tmp_path, {
        "load_problem.class": "tsp",
        "load_problem.size": "4",
        "formulation.choice": "discrete",
    }, seed=2)
    inst = problems.TspInstance.create_random_instance(4, seed=2)
    expected_length, _ = best_tour_slow(inst.distances.tolist())
    result = artifacts.result
    assert "encoding_select" in result["path"]
    assert result["objective"] == pytest.approx(expected_length)


def test_maxcut_discrete_binary_route(tmp_path):
    artifacts = run_scripted(tmp_path, {
        "load_problem.size": "6",
        "formulation.choice": "discrete",
        "encoding.choice": "binary",
    }, seed=3)
    inst = problems.MaxCutInstance.create_random_instance(6, seed=3)
    expected, _ = best_cut_slow(inst.num_nodes, inst.edges)
    assert artifacts.result["objective"] == expected


def test_qaoa_path_with_template_mixer(tmp_path, k3_file):
    artifacts = run_scripted(tmp_path, {
        "load_problem.source": "load",
        "load_problem.path": str(k3_file),
        "algorithm.choice": "qaoa",
    }, seed=0)
    result = artifacts.result
    assert result["path"] == [
        "load_problem", "formulation_select", "algorithm_select",
        "ising_conversion", "select_layers", "load_or_generate_mixer",
        "select_mixer", "select_optimizer", "solver_setup",
        "backend_select", "algorithm_execute"]
    assert result["solver_name"] == "qaoa"
    assert result["objective"] == 2.0
    assert result["solver_stats"]["circuit_evaluations"] > 0
    assert "best_circuit" in result and "rzz" in result["best_circuit"]


def test_vqe_path(tmp_path, k3_file):
    artifacts = run_scripted(tmp_path, {
        "load_problem.source": "load",
        "load_problem.path": str(k3_file),
        "algorithm.choice": "vqe",
    }, seed=0)
    result = artifacts.result
    assert result["solver_name"] == "vqe"
    assert "select_ansatz" in result["path"]
    assert result["objective"] == 2.0


def test_tabu_path(tmp_path):
    artifacts = run_scripted(tmp_path, {
        "load_problem.size": "9",
        "algorithm.choice": "tabu",
    }, seed=1)
    inst = problems.MaxCutInstance.create_random_instance(9, seed=1)
    expected, _ = best_cut_slow(inst.num_nodes, inst.edges)
    assert artifacts.result["solver_name"] == "tabu"
    assert artifacts.result["objective"] == expected


def test_qaoa_with_loaded_mixer(tmp_path, k3_file):
    mixer_path = tmp_path / "xmix.qasm"
    mixer_path.write_text(render_qasm3(build_mixer("X", 3)))
    artifacts = run_scripted(tmp_path, {
        "load_problem.source": "load",
        "load_problem.path": str(k3_file),
        "algorithm.choice": "qaoa",
        "mixer.source": "load",
        "mixer.path": str(mixer_path),
    }, seed=0)
    result = artifacts.result
    assert "select_mixer" not in result["path"]
    assert result["objective"] == 2.0


def test_malformed_mixer_file_fails_node(tmp_path, k3_file):
    mixer_path = tmp_path / "bad.qasm"
    mixer_path.write_text("qubit[3] q; measure q[0];")
    with pytest.raises(NodeFailure) as err:
        run_scripted(tmp_path, {
            "load_problem.source": "load",
            "load_problem.path": str(k3_file),
            "algorithm.choice": "qaoa",
            "mixer.source": "load",
            "mixer.path": str(mixer_path),
        })
    assert err.value.node_id == "load_or_generate_mixer"


def test_mixer_qubit_count_checked(tmp_path, k3_file):
    mixer_path = tmp_path / "xmix2.qasm"
    mixer_path.write_text(render_qasm3(build_mixer("X", 2)))
    with pytest.raises(NodeFailure):
        run_scripted(tmp_path, {
            "load_problem.source": "load",
            "load_problem.path": str(k3_file),
            "algorithm.choice": "qaoa",
            "mixer.source": "load",
            "mixer.path": str(mixer_path),
        })


def test_auto_mode_completes_without_any_answers(tmp_path):
    config = Config(output_dir=str(tmp_path / "runs"), seed=4,
                    automation="auto")
    artifacts = run_tree(config, AutoSource(), root=load_problem_node())
    assert artifacts.result["problem_class"] == "maxcut"
    assert len(artifacts.result["solution"]) == 8  # default generated size
    assert artifacts.result["solver_name"] == "brute_force"


@pytest.mark.parametrize("answers", [
    {"algorithm.choice": "brute_force"},
    {"algorithm.choice": "tabu"},
    {"algorithm.choice": "qaoa"},
    {"algorithm.choice": "vqe"},
    {"formulation.choice": "discrete", "algorithm.choice": "brute_force"},
    {"formulation.choice": "discrete", "algorithm.choice": "qaoa"},
])
def test_every_catalog_path_within_twelve_nodes(tmp_path, answers):
    artifacts = run_scripted(tmp_path, {"load_problem.size": "5", **answers},
                             seed=0)
    assert len(artifacts.path) <= 12
    assert artifacts.path[-1] == "algorithm_execute"
    assert set(artifacts.path) <= set(ALL_NODE_IDS)
    assert len(set(artifacts.path)) == len(artifacts.path)  # acyclic


def test_objective_equals_evaluate_objective_on_every_path(tmp_path):
    for answers in ({}, {"algorithm.choice": "qaoa"},
                    {"formulation.choice": "discrete"}):
        artifacts = run_scripted(tmp_path, {"load_problem.size": "5", **answers},
                                 seed=6)
        inst = problems.MaxCutInstance.create_random_instance(5, seed=6)
        assert artifacts.result["objective"] == inst.evaluate_objective(
            artifacts.result["solution"])


# --- individual node behavior ---

def prepared_problem_data(num_vars):
    from qdt.encodings import QuboModel
    pd = ProblemData()
    pd["qubo"] = QuboModel.from_terms(num_vars, linear={0: -1.0})
    return pd


def test_algorithm_recommendation_prefers_exactness():
    node = AlgorithmSelectNode()
    pd = prepared_problem_data(8)
    node.execute(pd, Config(), AutoSource())
    assert pd["algorithm"] == "brute_force"


def test_algorithm_recommendation_falls_back_to_tabu():
    node = AlgorithmSelectNode()
    pd = prepared_problem_data(30)
    node.execute(pd, Config(), AutoSource())
    assert pd["algorithm"] == "tabu"


def test_ising_conversion_maps_spins_back_to_bits():
    from qdt.nodes import IsingConversionNode
    node = IsingConversionNode()
    result = node.interpret_result({"spins": [1, -1]}, ProblemData(),
                                   Config(), {})
    assert result["best_bits"] == [0, 1]


def test_ising_conversion_records_offset():
    from qdt.encodings import QuboModel
    from qdt.nodes import IsingConversionNode
    node = IsingConversionNode()
    pd = ProblemData()
    pd["qubo"] = QuboModel(2, [[-1.0, 2.0], [0.0, -1.0]])
    pd["algorithm"] = "qaoa"
    info = node.execute(pd, Config(), AutoSource())
    assert pd["num_qubits"] == 2
    assert pd["ising"].offset == -0.5
    assert info["offset"] == -0.5


def test_backend_options_locked_without_token():
    node = BackendSelectNode()
    pd = ProblemData()
    node.execute(pd, Config(), AutoSource())
    assert pd["backend"] == "statevector"


def test_backend_locked_choice_rejected_for_scripts():
    node = BackendSelectNode()
    pd = ProblemData()
    with pytest.raises(RuntimeError, match="access token"):
        node.execute(pd, Config(),
                     ScriptedSource({"backend.choice": "2"}))


def test_backend_unlocked_by_token_but_not_integrated():
    node = BackendSelectNode()
    pd = ProblemData()
    config = Config(tokens={"remote_qpu": "secret"})
    with pytest.raises(RuntimeError, match="no provider integration"):
        node.execute(pd, config,
                     ScriptedSource({"backend.choice": "remote_qpu"}))


def test_generated_instance_is_persisted(tmp_path):
    artifacts = run_scripted(tmp_path, {"load_problem.size": "5"}, seed=8)
    names = sorted(p.name for p in artifacts.run_dir.iterdir())
    assert names == ["problem_data.json", "problem_instance.json",
                     "result.json", "run_config.json"]
    record = json.loads((artifacts.run_dir / "problem_instance.json").read_text())
    assert record == problems.MaxCutInstance.create_random_instance(
        5, seed=8).to_record()


def test_loaded_instance_not_duplicated(tmp_path, k3_file):
    artifacts = run_scripted(tmp_path, {
        "load_problem.source": "load",
        "load_problem.path": str(k3_file),
    })
    names = sorted(p.name for p in artifacts.run_dir.iterdir())
    assert names == ["problem_data.json", "result.json", "run_config.json"]


def test_instance_metadata_carried_into_result(tmp_path):
    record = dict(K3_RECORD)
    record["metadata"] = {"customer": "acme"}
    path = tmp_path / "k3meta.json"
    path.write_text(json.dumps(record))
    artifacts = run_scripted(tmp_path, {
        "load_problem.source": "load",
        "load_problem.path": str(path),
    })
    assert artifacts.result["metadata"] == {"customer": "acme"}


def test_spsa_optimizer_selectable(tmp_path, k3_file):
    artifacts = run_scripted(tmp_path, {
        "load_problem.source": "load",
        "load_problem.path": str(k3_file),
        "algorithm.choice": "qaoa",
        "optimizer.choice": "SPSA",
        "optimizer.maxiter": "60",
    }, seed=0)
    stats = artifacts.result["solver_stats"]
    assert stats["iterations"] == 60
    assert stats["circuit_evaluations"] == 121
