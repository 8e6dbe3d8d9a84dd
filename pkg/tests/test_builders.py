import pytest

from qdt.builders import (Builder, Hyperparameter, discover, find_builder,
                          register_builder)
from qdt.errors import (UnboundHyperparameter, UnknownHyperparameter,
                        ValueRejected)
from qdt.queries import Query, ScriptedSource, ask


def toy_builder(**overrides):
    hyperparameters = (
        Hyperparameter("maxiter", "int", default=200, test=lambda v: v > 0,
                       test_message="must be larger than zero"),
        Hyperparameter("layers", "int", default=1, allow_multiple=True,
                       test=lambda v: v >= 1, test_message="must be at least 1"),
        Hyperparameter("entangler", "choice", options=("cz", "cx"),
                       default="cz"),
    )
    fields = dict(target_kind="generic", display_name="Toy",
                  hyperparameters=hyperparameters,
                  factory=lambda values: dict(values))
    fields.update(overrides)
    return Builder(**fields)


def test_list_hyperparameters_keeps_declaration_order():
    names = [hp.name for hp in toy_builder().list_hyperparameters()]
    assert names == ["maxiter", "layers", "entangler"]


def test_set_value_binds_after_checks():
    builder = toy_builder().set_value("maxiter", 200)
    assert builder.bound_values == {"maxiter": 200}


def test_set_value_rejects_failing_test():
    with pytest.raises(ValueRejected) as err:
        toy_builder().set_value("maxiter", -5)
    assert "must be larger than zero" in str(err.value)


def test_set_value_rejects_wrong_type():
    with pytest.raises(ValueRejected):
        toy_builder().set_value("maxiter", "many")
    with pytest.raises(ValueRejected):
        toy_builder().set_value("entangler", "swap")


def test_set_value_unknown_name():
    with pytest.raises(UnknownHyperparameter):
        toy_builder().set_value("stepsize", 1)


def test_allow_multiple_accepts_element_wise_valid_lists():
    builder = toy_builder().set_value("layers", [2, 2, 1])
    assert builder.bound_values["layers"] == [2, 2, 1]
    with pytest.raises(ValueRejected):
        toy_builder().set_value("layers", [2, 0, 1])


def test_builders_are_value_like():
    original = toy_builder()
    changed = original.set_value("maxiter", 7)
    assert original.bound_values == {}
    assert changed.bound_values == {"maxiter": 7}


def test_build_with_defaults():
    assert toy_builder().build() == {"maxiter": 200, "layers": 1,
                                     "entangler": "cz"}


def test_build_order_independent():
    a = toy_builder().set_value("maxiter", 5).set_value("entangler", "cx")
    b = toy_builder().set_value("entangler", "cx").set_value("maxiter", 5)
    assert a.build() == b.build()


def test_unbound_hyperparameter_reported_by_name():
    no_default = Builder(
        target_kind="generic", display_name="Strict",
        hyperparameters=(Hyperparameter("layers", "int"),),
        factory=lambda values: values)
    with pytest.raises(UnboundHyperparameter) as err:
        no_default.build()
    assert err.value.names == ["layers"]
    assert no_default.set_value("layers", 2).build() == {"layers": 2}


def test_default_must_pass_its_own_test():
    with pytest.raises(ValueError):
        Hyperparameter("maxiter", "int", default=0, test=lambda v: v > 0,
                       test_message="must be larger than zero")


def test_discover_shipped_catalogs():
    assert [b.display_name for b in discover("optimizer")] == ["NelderMead", "SPSA"]
    assert [b.display_name for b in discover("mixer")] == ["X", "XY", "Ring"]
    assert [b.display_name for b in discover("ansatz")] == ["HardwareEfficient"]
    assert discover("transpiler") == []


def test_mixer_builders_take_qubit_count_externally():
    for builder in discover("mixer"):
        assert builder.list_hyperparameters() == []
        assert builder.build(num_qubits=4).num_qubits == 4


def test_ansatz_builder_declared_hyperparameters():
    names = [hp.name for hp in
             find_builder("ansatz", "HardwareEfficient").list_hyperparameters()]
    assert names == ["layers", "entangler"]


def test_runtime_registration_extends_catalog():
    marker = toy_builder(display_name="Extra", target_kind="optimizer")
    register_builder(marker)
    try:
        assert discover("optimizer")[-1].display_name == "Extra"
    finally:
        from qdt.builders import _REGISTRY
        _REGISTRY.remove(marker)


def test_every_shipped_builder_builds_from_defaults():
    # automated runs depend on this: no user input, still constructible
    for builder in discover("optimizer"):
        assert builder.build() is not None
    for builder in discover("mixer") + discover("ansatz"):
        assert builder.build(num_qubits=3) is not None


def test_shipped_optimizer_defaults():
    nm = find_builder("optimizer", "NelderMead").build()
    assert nm.options == {"maxiter": 0, "initial_step": 0.5, "xtol": 1e-6}
    spsa = find_builder("optimizer", "SPSA").build()
    assert spsa.options == {"maxiter": 200, "a": 0.1, "c": 0.1,
                            "alpha": 0.602, "gamma": 0.101}


def test_spsa_builder_honors_maxiter():
    spec = find_builder("optimizer", "SPSA").set_value("maxiter", 100).build()
    outcome = spec.minimize(lambda x: float(x[0] ** 2), [1.0], seed=0)
    assert outcome.iterations == 100
    assert len(outcome.history) == 201


def test_hyperparam_query_round_trip_never_rejected():
    # querying a hyperparameter and binding the answer must always succeed
    for builder in discover("optimizer") + discover("ansatz"):
        for hp in builder.list_hyperparameters():
            query = Query(id=f"x.{hp.name}", prompt=hp.name, kind="hyperparam",
                          hyperparameter=hp, default=hp.default)
            for raw in ("", "2", "cx" if hp.type == "choice" else "3"):
                source = ScriptedSource({query.id: raw} if raw else {})
                try:
                    answer = ask(query, source)
                except Exception:
                    continue  # rejected at the query layer, never reaches bind
                builder.set_value(hp.name, answer.value)
