import json

import pytest
from fastapi.testclient import TestClient

from fixtures import fixture_bytes
from main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def document(name):
    return json.loads(fixture_bytes(name))


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"
    assert response.json()["fixtures_available"]


def test_root_lists_fixtures(client):
    body = client.get("/").json()
    assert "lotka_volterra" in body["fixtures"]
    assert body["endpoints"]["distance"] == "/distance"


def test_build(client):
    response = client.post("/models/build", json=document("lotka_volterra"))
    assert response.status_code == 200
    body = response.json()
    assert body["counts"] == [7, 14, 11, 3, 0]
    assert body["valid"]


def test_build_auto_close(client):
    model = {
        "name": "abierto",
        "universe": {"labels": ["a", "b"]},
        "mode": "explicit",
        "max_dim": 1,
        "simplices": [["a", "b"]],
    }
    assert client.post("/models/build", json=model).status_code == 400
    response = client.post("/models/build", params={"auto_close": True}, json=model)
    assert response.status_code == 200
    assert response.json()["auto_closed"]
    assert response.json()["counts"] == [2, 1]


def test_unknown_key_is_rejected(client):
    model = document("lotka_volterra")
    model["colour"] = "red"
    assert client.post("/models/build", json=model).status_code == 400


def test_distance(client):
    payload = {"first": document("tp1_activator_inhibitor"), "second": document("pi4_annihilation")}
    assert client.post("/distance", json=payload).json()["distance"] == 268
    payload["mode"] = "persistence"
    response = client.post("/distance", json=payload)
    assert response.status_code == 200
    assert response.json() == {"success": True, "mode": "persistence", "distance": 268}


def test_distance_universe_mismatch(client):
    payload = {"first": document("lotka_volterra"), "second": document("pi4_annihilation")}
    response = client.post("/distance", json=payload)
    assert response.status_code == 422


def test_barcode_text(client):
    model = {
        "name": "triangle",
        "universe": {"labels": ["a", "b", "c"]},
        "mode": "flag",
        "max_dim": 1,
        "edges": [["a", "b"], ["a", "c"], ["b", "c"]],
    }
    response = client.post("/barcode", json={"model": model, "format": "text"})
    assert response.status_code == 200
    assert response.json()["document"] == "H0 [1, inf)\nH0 [2, 4)\nH0 [3, 5)\nH1 [6, inf)\n"


def test_barcode_json(client):
    response = client.post("/barcode", json={"model": document("lotka_volterra")})
    intervals = response.json()["document"]["intervals"]
    # Cada símplice nace o mata exactamente una barra
    cells = sum(1 if death is None else 2 for bars in intervals.values() for _, death in bars)
    assert cells == 7 + 14 + 11 + 3


def test_verify(client):
    payload = {
        "source": document("tp1_activator_inhibitor"),
        "target": document("pi4_annihilation"),
        "script": document("tp1_to_pi4"),
        "declaration": document("pattern_formation_concepts"),
    }
    body = client.post("/equivalence/verify", json=payload).json()
    assert body["accepted"]
    assert len(body["trace"]) == 5
    assert body["error"] is None


def test_search_not_found(client):
    payload = {
        "source": document("ordered_sequential"),
        "target": document("ping_pong"),
        "declaration": document("bisubstrate_concepts"),
        "max_ops": 3,
    }
    body = client.post("/equivalence/search", json=payload).json()
    assert body["found"] is False
    assert body["script"] is None


def test_fixture_endpoint(client):
    response = client.get("/fixtures/lotka_volterra")
    assert response.status_code == 200
    assert response.json()["name"] == "lotka_volterra"
    assert client.get("/fixtures/pi6").status_code == 404
