import numpy as np
import pytest

from qdt import problems
from qdt.encodings import evaluate_qubo
from qdt.engine import canonical_json
from qdt.errors import (InvalidSolutionShape, MissingField, ShapeMismatch,
                        SizeTooSmall, UnsupportedEncoding)
from qdt.problems import MaxCutInstance, TspInstance

from conftest import (K3_RECORD, TSP3_RECORD, best_tour_slow, cut_value_slow,
                      enumerate_bits, tour_length_slow)


# --- random instance generation ---

def test_tsp_random_is_seed_deterministic():
    a = TspInstance.create_random_instance(4, seed=0)
    b = TspInstance.create_random_instance(4, seed=0)
    assert np.array_equal(a.distances, b.distances)
    c = TspInstance.create_random_instance(4, seed=1)
    assert not np.array_equal(a.distances, c.distances)


def test_tsp_random_matrix_shape_and_range():
    inst = TspInstance.create_random_instance(6, seed=5)
    d = inst.distances
    assert np.all(np.diag(d) == 0)
    off = d[~np.eye(6, dtype=bool)]
    assert np.all((off >= 1) & (off <= 100))
    assert np.all(off == off.astype(int))


def test_tsp_too_small():
    with pytest.raises(SizeTooSmall):
        TspInstance.create_random_instance(2, seed=0)


def test_maxcut_random_unit_weights():
    inst = MaxCutInstance.create_random_instance(6, seed=1)
    assert 0 <= len(inst.edges) <= 15
    assert all(w == 1.0 for _, _, w in inst.edges)
    same = MaxCutInstance.create_random_instance(6, seed=1)
    assert inst == same


def test_maxcut_too_small():
    with pytest.raises(SizeTooSmall):
        MaxCutInstance.create_random_instance(1, seed=0)


# --- records ---

def test_tsp_from_record_minimal():
    inst = problems.from_record(TSP3_RECORD)
    assert isinstance(inst, TspInstance)
    assert inst.num_cities == 3


def test_tsp_from_record_with_coordinates():
    record = dict(TSP3_RECORD)
    record["coordinates"] = [[0, 0], [1, 0], [0, 1]]
    inst = problems.from_record(record)
    assert inst.coordinates is not None


def test_tsp_from_record_missing_distances():
    with pytest.raises(MissingField):
        problems.from_record({"problem_class": "tsp"})


def test_tsp_record_shape_errors():
    with pytest.raises(ShapeMismatch):
        TspInstance.from_record({"distances": [[0, 1], [1, 0]]})
    with pytest.raises(ShapeMismatch):
        TspInstance.from_record({"distances": [[0, 1, 2], [1, 5, 3], [2, 3, 0]]})
    with pytest.raises(ShapeMismatch):
        TspInstance.from_record(
            {"distances": [[0, -1, 2], [1, 0, 3], [2, 3, 0]]})


def test_round_trip_identity():
    for seed in range(3):
        inst = TspInstance.create_random_instance(5, seed=seed)
        assert TspInstance.from_record(inst.to_record()) == inst
        cut = MaxCutInstance.create_random_instance(5, seed=seed)
        assert MaxCutInstance.from_record(cut.to_record()) == cut


def test_record_canonical_form_is_stable():
    record = problems.from_record(K3_RECORD).to_record()
    again = problems.from_record(record).to_record()
    assert canonical_json(record) == canonical_json(again)


def test_metadata_preserved():
    record = dict(K3_RECORD)
    record["metadata"] = {"customer": "acme", "week": 12}
    inst = problems.from_record(record)
    assert inst.metadata == {"customer": "acme", "week": 12}
    assert inst.to_record()["metadata"] == record["metadata"]


def test_maxcut_record_validation():
    with pytest.raises(MissingField):
        MaxCutInstance.from_record({"num_nodes": 3})
    with pytest.raises(ShapeMismatch):
        MaxCutInstance.from_record({"num_nodes": 3, "edges": [[1, 0]]})
    with pytest.raises(ShapeMismatch):
        MaxCutInstance.from_record(
            {"num_nodes": 3, "edges": [[0, 1], [0, 1, 2.0]]})


# --- objectives ---

def test_tsp_objective_all_three_city_tours():
    inst = problems.from_record(
        {"problem_class": "tsp", "distances": [[0, 1, 3], [1, 0, 2], [3, 2, 0]]})
    for tour in ([0, 1, 2], [0, 2, 1], [1, 2, 0]):
        assert inst.evaluate_objective(tour) == 6.0


def test_tsp_objective_rotation_invariant():
    inst = TspInstance.create_random_instance(5, seed=2)
    tour = [0, 3, 1, 4, 2]
    rotated = tour[2:] + tour[:2]
    assert inst.evaluate_objective(tour) == inst.evaluate_objective(rotated)


def test_tsp_objective_rejects_non_permutation():
    inst = TspInstance.create_random_instance(4, seed=0)
    with pytest.raises(InvalidSolutionShape):
        inst.evaluate_objective([0, 1, 1, 2])


def test_maxcut_objective_examples():
    inst = problems.from_record(K3_RECORD)
    assert inst.evaluate_objective([0, 0, 1]) == 2.0
    assert inst.evaluate_objective([0, 0, 0]) == 0.0
    with pytest.raises(InvalidSolutionShape):
        inst.evaluate_objective([0, 1])


# --- formulations ---

def test_tsp_one_hot_variable_count():
    inst = TspInstance.create_random_instance(4, seed=0)
    qubo, decoding = inst.formulate_problem("one-hot")
    assert qubo.num_vars == 9  # (n-1)^2 with city 0 pinned
    assert decoding.fixed == {"position_0": 0}


def test_tsp_unsupported_encoding():
    inst = TspInstance.create_random_instance(4, seed=0)
    with pytest.raises(UnsupportedEncoding):
        inst.formulate_problem("binary")


def test_tsp_one_hot_feasible_energy_is_tour_length():
    inst = TspInstance.create_random_instance(4, seed=7)
    qubo, decoding = inst.formulate_problem("one-hot")
    d = inst.distances.tolist()
    feasible = 0
    for bits in enumerate_bits(9):
        values, repaired = decoding.decode_bits(bits)
        if repaired or len(set(values)) != 3:
            continue
        feasible += 1
        tour = [0] + [v + 1 for v in values]
        assert evaluate_qubo(qubo, bits) == pytest.approx(
            tour_length_slow(d, tour))
    assert feasible == 6  # 3! orderings of cities 1..3


def test_tsp_one_hot_infeasible_strictly_dominated():
    inst = TspInstance.create_random_instance(4, seed=9)
    qubo, decoding = inst.formulate_problem("one-hot")
    d = inst.distances.tolist()
    optimum = best_tour_slow(d)[0]
    for bits in enumerate_bits(9):
        values, repaired = decoding.decode_bits(bits)
        infeasible = repaired or len(set(values)) != 3
        if infeasible:
            assert evaluate_qubo(qubo, bits) > optimum


def test_tsp_one_hot_minimum_decodes_to_optimal_tour():
    inst = TspInstance.create_random_instance(4, seed=11)
    qubo, decoding = inst.formulate_problem("one-hot")
    best_bits = min(enumerate_bits(9), key=lambda b: evaluate_qubo(qubo, b))
    solution = inst.decode_solution(list(best_bits), decoding)
    assert not solution.repaired
    expected_length, _ = best_tour_slow(inst.distances.tolist())
    assert solution.objective == pytest.approx(expected_length)


def test_maxcut_direct_single_edge_energies():
    inst = MaxCutInstance(2, [(0, 1, 1.0)])
    qubo, _ = inst.formulate_problem("direct")
    energies = {bits: evaluate_qubo(qubo, bits) for bits in enumerate_bits(2)}
    assert energies == {(0, 0): 0.0, (0, 1): -1.0, (1, 0): -1.0, (1, 1): 0.0}


def test_maxcut_direct_energy_is_negated_cut():
    inst = MaxCutInstance.create_random_instance(7, seed=3)
    qubo, decoding = inst.formulate_problem("direct")
    for bits in enumerate_bits(7):
        cut = cut_value_slow(inst.edges, bits)
        assert evaluate_qubo(qubo, bits) == pytest.approx(-cut)
        assert inst.signed_objective_from_energy(
            evaluate_qubo(qubo, bits)) == pytest.approx(cut)


# --- discrete route ---

def test_tsp_discrete_shape():
    inst = TspInstance.create_random_instance(4, seed=0)
    dp = inst.to_discrete_problem()
    assert dp.variables == [("position_1", 3), ("position_2", 3), ("position_3", 3)]
    assert len(dp.constraint_groups) == 3  # one all-different group per city


def test_maxcut_discrete_shape():
    inst = problems.from_record(K3_RECORD)
    dp = inst.to_discrete_problem()
    assert dp.variables == [("node_0", 2), ("node_1", 2), ("node_2", 2)]
    assert len(dp.objective_terms) == 6  # two indicator products per edge
    assert dp.constraint_groups == []


def test_tsp_discrete_objective_matches_tour_length():
    inst = TspInstance.create_random_instance(4, seed=13)
    dp = inst.to_discrete_problem()
    d = inst.distances.tolist()
    import itertools
    for perm in itertools.permutations(range(3)):
        assignment = {f"position_{t + 1}": perm[t] for t in range(3)}
        assert dp.is_feasible(assignment)
        tour = [0] + [v + 1 for v in perm]
        assert dp.evaluate(assignment) == pytest.approx(tour_length_slow(d, tour))


def test_maxcut_discrete_objective_is_negated_cut():
    inst = problems.from_record(K3_RECORD)
    dp = inst.to_discrete_problem()
    for bits in enumerate_bits(3):
        assignment = {f"node_{i}": bits[i] for i in range(3)}
        assert dp.evaluate(assignment) == pytest.approx(
            -cut_value_slow(inst.edges, bits))


# --- decoding ---

def test_tsp_decode_valid_permutation_matrix():
    inst = TspInstance.create_random_instance(4, seed=0)
    _, decoding = inst.formulate_problem("one-hot")
    # positions 1..3 hold cities 2, 1, 3
    bits = [0, 1, 0, 1, 0, 0, 0, 0, 1]
    solution = inst.decode_solution(bits, decoding)
    assert solution.tour == [0, 2, 1, 3]
    assert not solution.repaired


def test_tsp_decode_repairs_empty_row():
    inst = TspInstance.create_random_instance(4, seed=0)
    _, decoding = inst.formulate_problem("one-hot")
    # position 2 row is all-zero: lowest unused city fills the hole
    bits = [0, 1, 0, 0, 0, 0, 0, 0, 1]
    solution = inst.decode_solution(bits, decoding)
    assert solution.repaired
    assert solution.tour == [0, 2, 1, 3]


def test_tsp_decode_repairs_duplicate_city():
    inst = TspInstance.create_random_instance(4, seed=0)
    _, decoding = inst.formulate_problem("one-hot")
    # positions 1 and 2 both claim city 2
    bits = [0, 1, 0, 0, 1, 0, 0, 0, 1]
    solution = inst.decode_solution(bits, decoding)
    assert solution.repaired
    assert sorted(solution.tour) == [0, 1, 2, 3]
    assert solution.tour[0] == 0 and solution.tour[1] == 2


def test_maxcut_decode_is_partition():
    inst = problems.from_record(K3_RECORD)
    _, decoding = inst.formulate_problem("direct")
    solution = inst.decode_solution([0, 1, 1], decoding)
    assert solution.partition == [0, 1, 1]
    assert solution.objective == 2.0
    assert not solution.repaired


def test_formulation_options():
    tsp = TspInstance.create_random_instance(4, seed=0)
    assert tsp.formulation_options == ["one-hot-direct", "discrete"]
    cut = problems.from_record(K3_RECORD)
    assert cut.formulation_options == ["direct", "discrete"]


def test_recommended_penalty_dominates():
    inst = TspInstance.create_random_instance(4, seed=1)
    assert inst.recommended_penalty() == 1 + 2 * 4 * inst.distances.max()
