import pytest
from fastapi.testclient import TestClient

from pswork import fixtures
from pswork.formats import parse_document
from pswork.gametrace import replay_document
from pswork.server import create_app


@pytest.fixture()
def client():
    app = create_app()
    with TestClient(app) as c:
        yield c


def make_session(client, model_name="cat.model.json", config_name="times2_glu.morphism.json"):
    model_doc = fixtures.data_document(model_name)
    config_doc = fixtures.data_document(config_name)
    r = client.post("/sessions", json={"model": model_doc, "config": config_doc})
    assert r.status_code == 200, r.text
    return r.json()


def test_create_and_fetch_state(client):
    state = make_session(client)
    assert state["status"] == "open"
    assert state["won"] is False
    sid = state["session_id"]
    r = client.get(f"/sessions/{sid}")
    assert r.status_code == 200
    assert r.json()["digest"] == state["digest"]
    assert [c["name"] for c in state["conditions"]] == ["g^p", "g^lu", "g^ru", "g^ass"]
    # element tables track the configuration's sizes
    assert len(state["x"]["m"]) == 12
    assert len(state["y"]["m"]) == 9


def test_unknown_session_404(client):
    assert client.get("/sessions/nope").status_code == 404


def test_move_listing_filters_and_pagination(client):
    state = make_session(client)
    sid = state["session_id"]
    r = client.get(f"/sessions/{sid}/moves", params={"kind": "DomE", "condition": 1})
    assert r.status_code == 200
    body = r.json()
    assert body["total"] == 3
    assert all(m["kind"] == "DomE" and m["condition"] == 1 for m in body["moves"])
    r = client.get(f"/sessions/{sid}/moves",
                   params={"kind": "DomE", "condition": 1, "page_size": 2})
    assert len(r.json()["moves"]) == 2
    r = client.get(f"/sessions/{sid}/moves",
                   params={"kind": "DomE", "condition": 1, "page": 1, "page_size": 2})
    assert len(r.json()["moves"]) == 1
    assert client.get(f"/sessions/{sid}/moves", params={"kind": "Bogus"}).status_code == 422


def test_play_three_moves_to_win_and_export_trace(client):
    state = make_session(client)
    sid = state["session_id"]
    for i in range(3):
        # the productive filter is what the UI surfaces as suggested moves
        r = client.get(f"/sessions/{sid}/moves",
                       params={"kind": "DomE", "condition": 1, "productive": "true"})
        moves = r.json()["moves"]
        assert moves, f"no moves left before win at step {i}"
        r = client.post(f"/sessions/{sid}/moves/{moves[0]['digest']}")
        assert r.status_code == 200, r.text
        state = r.json()
    assert state["won"] is True
    assert state["status"] == "won"
    r = client.get(f"/sessions/{sid}/trace")
    assert r.status_code == 200
    trace_doc = r.json()
    td = parse_document(trace_doc).value
    ok, final, problems = replay_document(td)
    assert ok, problems
    assert final.won()
    # the exported digests match the session's reported state digest
    assert trace_doc["payload"]["steps"][-1]["digest"] == state["digest"]


def test_stale_move_rejected_after_state_change(client):
    state = make_session(client)
    sid = state["session_id"]
    r = client.get(f"/sessions/{sid}/moves", params={"kind": "DomE", "condition": 1})
    moves = r.json()["moves"]
    first = moves[0]["digest"]
    second = moves[1]["digest"]
    assert client.post(f"/sessions/{sid}/moves/{first}").status_code == 200
    # the old digest was minted against the previous configuration
    assert client.post(f"/sessions/{sid}/moves/{second}").status_code == 409


def test_apply_then_undo_restores_digest(client):
    state = make_session(client)
    sid = state["session_id"]
    before = state["digest"]
    moves = client.get(f"/sessions/{sid}/moves",
                       params={"kind": "DomE", "condition": 1}).json()["moves"]
    applied = client.post(f"/sessions/{sid}/moves/{moves[0]['digest']}").json()
    assert applied["digest"] != before
    undone = client.post(f"/sessions/{sid}/undo").json()
    assert undone["digest"] == before
    assert undone["history_length"] == 0
    # move list after undo equals the pre-apply list
    again = client.get(f"/sessions/{sid}/moves",
                       params={"kind": "DomE", "condition": 1}).json()["moves"]
    assert [m["digest"] for m in again] == [m["digest"] for m in moves]


def test_undo_on_fresh_session_conflicts(client):
    state = make_session(client)
    assert client.post(f"/sessions/{state['session_id']}/undo").status_code == 409


def test_create_already_won_session(client):
    # identity configuration on a condition source: already an isomorphism
    model_doc = fixtures.data_document("setset.model.json")
    source = model_doc["payload"]["conditions"][0]["morphism"]["source"]
    config_doc = {
        "format_version": "1.0.0",
        "kind": "morphism",
        "payload": {
            "source": source,
            "target": source,
            "components": {
                "s_l": {"al": "al"},
                "s_r": {"ar": "ar"},
            },
        },
    }
    r = TestClient(create_app()).post(
        "/sessions", json={"model": model_doc, "config": config_doc})
    assert r.status_code == 200
    assert r.json()["won"] is True


def test_invalid_config_document_422(client):
    model_doc = fixtures.data_document("setset.model.json")
    bad_config = {"format_version": "1.0.0", "kind": "morphism",
                  "payload": {"source": {"sets": {}}, "target": {"sets": {}},
                              "components": {"s_l": {"zz": "yy"}}}}
    r = client.post("/sessions", json={"model": model_doc, "config": bad_config})
    assert r.status_code == 422
