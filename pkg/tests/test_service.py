import json
import time

import pytest
from fastapi.testclient import TestClient

from qdt.engine import Config
from qdt.service import create_app

from conftest import best_cut_slow


@pytest.fixture
def client(tmp_path):
    config = Config(output_dir=str(tmp_path / "runs"), seed=0)
    app = create_app(config)
    with TestClient(app) as client:
        yield client


def answer(client, session_id, query_id, value):
    response = client.post(f"/sessions/{session_id}/answer",
                           json={"query_id": query_id, "value": value})
    assert response.status_code == 200, response.text
    return response.json()


def test_create_session_presents_root_query(client):
    session = client.post("/sessions", json={}).json()
    assert session["state"] == "awaiting_answer"
    assert session["pending_query"]["id"] == "load_problem.source"
    assert session["pending_query"]["options"] == ["generate", "load"]


def test_auto_session_completes_immediately(client):
    session = client.post("/sessions", json={"automation": "auto",
                                             "seed": 1}).json()
    assert session["state"] == "finished"
    result = client.get(f"/sessions/{session['id']}/result").json()
    assert result["problem_class"] == "maxcut"
    assert result["solver_name"] == "brute_force"


def test_bad_overrides_rejected(client):
    response = client.post("/sessions", json={"automation": "warp"})
    assert response.status_code == 400


def test_invalid_answer_returns_violation_and_keeps_pending(client, tmp_path):
    session = client.post("/sessions", json={}).json()
    sid = session["id"]
    state = answer(client, sid, "load_problem.source", "generate")
    assert state["pending_query"]["id"] == "load_problem.class"
    state = answer(client, sid, "load_problem.class", "maxcut")
    assert state["pending_query"]["id"] == "load_problem.size"
    state = answer(client, sid, "load_problem.size", "abc")
    assert state["state"] == "awaiting_answer"
    assert state["pending_query"]["id"] == "load_problem.size"
    assert "violation" in state["pending_query"]


def test_exit_aborts_session(client):
    session = client.post("/sessions", json={}).json()
    state = answer(client, session["id"], "load_problem.source", "exit")
    assert state["state"] == "aborted"
    assert "pending_query" not in state


def test_unknown_session_is_404(client):
    assert client.get("/sessions/nope").status_code == 404
    assert client.post("/sessions/nope/answer",
                       json={"query_id": "x", "value": "1"}).status_code == 404


def test_mismatched_query_id_is_409(client):
    session = client.post("/sessions", json={}).json()
    response = client.post(f"/sessions/{session['id']}/answer",
                           json={"query_id": "wrong.id", "value": "1"})
    assert response.status_code == 409


def test_result_before_finish_is_409(client):
    session = client.post("/sessions", json={}).json()
    assert client.get(f"/sessions/{session['id']}/result").status_code == 409


def test_full_interactive_walkthrough_matches_oracle(client):
    session = client.post("/sessions", json={"seed": 5}).json()
    sid = session["id"]
    answer(client, sid, "load_problem.source", "generate")
    answer(client, sid, "load_problem.class", "maxcut")
    answer(client, sid, "load_problem.size", "6")
    answer(client, sid, "formulation.choice", "direct")
    state = answer(client, sid, "algorithm.choice", "brute_force")
    assert state["state"] == "finished"
    assert state["path_so_far"] == [
        "load_problem", "formulation_select", "algorithm_select",
        "solver_setup", "algorithm_execute"]

    from qdt.problems import MaxCutInstance
    inst = MaxCutInstance.create_random_instance(6, seed=5)
    expected, _ = best_cut_slow(inst.num_nodes, inst.edges)
    result = client.get(f"/sessions/{sid}/result").json()
    assert result["objective"] == expected

    artifacts = client.get(f"/sessions/{sid}/artifacts").json()
    names = {f["name"] for f in artifacts["files"]}
    assert {"result.json", "run_config.json", "problem_data.json"} <= names
    by_name = {f["name"]: f for f in artifacts["files"]}
    assert by_name["result.json"]["content"]["objective"] == expected
    assert "edges" in by_name["problem_instance.json"]["content"]


def test_result_equals_persisted_file(client, tmp_path):
    session = client.post("/sessions", json={"automation": "auto",
                                             "seed": 2}).json()
    sid = session["id"]
    result = client.get(f"/sessions/{sid}/result").json()
    artifacts = client.get(f"/sessions/{sid}/artifacts").json()
    path = next(f["path"] for f in artifacts["files"]
                if f["name"] == "result.json")
    assert result == json.loads(open(path).read())


def test_session_ids_are_long_random(client):
    a = client.post("/sessions", json={"automation": "auto"}).json()["id"]
    b = client.post("/sessions", json={"automation": "auto"}).json()["id"]
    assert a != b
    assert len(a) >= 22  # urlsafe encoding of >= 128 bits


def test_expired_session_is_404(tmp_path):
    config = Config(output_dir=str(tmp_path / "runs"))
    app = create_app(config, idle_timeout=0.2)
    with TestClient(app) as client:
        session = client.post("/sessions", json={}).json()
        time.sleep(0.5)
        assert client.get(f"/sessions/{session['id']}").status_code == 404


def test_tokens_never_echoed(tmp_path):
    config = Config(output_dir=str(tmp_path / "runs"),
                    tokens={"remote_qpu": "hunter2"})
    app = create_app(config)
    with TestClient(app) as client:
        session = client.post("/sessions", json={"automation": "auto",
                                                 "seed": 0}).json()
        sid = session["id"]
        for payload in (session,
                        client.get(f"/sessions/{sid}").json(),
                        client.get(f"/sessions/{sid}/result").json(),
                        client.get(f"/sessions/{sid}/artifacts").json()):
            assert "hunter2" not in json.dumps(payload)
        run_config = next(
            f["path"] for f in client.get(f"/sessions/{sid}/artifacts")
            .json()["files"] if f["name"] == "run_config.json")
        assert "hunter2" not in open(run_config).read()
