import json
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from taxlab.pipeline.service import create_app

DATA_DIR = Path(__file__).parent / "data"


def read_data(name: str) -> str:
    return (DATA_DIR / name).read_text(encoding="utf-8")


@pytest.fixture
def client():
    with TestClient(create_app(sync=True)) as c:
        yield c


def _new_session(client, name="web"):
    response = client.post("/api/sessions", json={"name": name})
    assert response.status_code == 200
    return response.json()["id"]


def _load_fixtures(client, session_id):
    for name in ("garments", "colors"):
        response = client.post(
            f"/api/taxonomies?session={session_id}", content=read_data(f"{name}.json")
        )
        assert response.status_code == 200
    response = client.post(
        f"/api/entities?session={session_id}", content=read_data("entities.json")
    )
    assert response.status_code == 200
    assert response.json()["rejected"] == []


def _run_step(client, session_id, kind, params, seed=0):
    response = client.post(
        f"/api/sessions/{session_id}/steps",
        json={"kind": kind, "params": params, "seed": seed},
    )
    assert response.status_code == 200, response.text
    job_id = response.json()["jobId"]
    deadline = time.monotonic() + 30.0
    while True:
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["status"] in ("done", "failed"):
            return job
        assert time.monotonic() < deadline
        time.sleep(0.01)


def _plan():
    return json.loads(read_data("plan.json"))


def test_health(client):
    assert client.get("/api/health").json() == {"status": "ok"}


def test_session_lifecycle(client):
    session_id = _new_session(client)
    assert session_id == "s1"
    assert _new_session(client, "second") == "s2"
    summary = client.get(f"/api/sessions/{session_id}").json()
    assert summary["name"] == "web"
    assert summary["entityCount"] == 0
    response = client.get("/api/sessions/s99")
    assert response.status_code == 404
    body = response.json()
    assert body["code"] == "unknownId"
    assert body["context"] == {"session": "s99"}


def test_taxonomy_routes(client):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    listing = client.get(f"/api/taxonomies?session={session_id}").json()
    assert {t["name"] for t in listing} == {"garments", "colors"}
    doc = client.get(f"/api/taxonomies/garments?session={session_id}").json()
    assert doc["name"] == "garments"
    assert any(node["id"] == "swim-shorts" for node in doc["nodes"])
    assert client.get(
        f"/api/taxonomies/fabrics?session={session_id}"
    ).status_code == 404
    # Session binding is mandatory.
    response = client.get("/api/taxonomies")
    assert response.status_code == 400
    assert response.json()["code"] == "validation"


def test_taxonomy_upload_errors(client):
    session_id = _new_session(client)
    response = client.post(f"/api/taxonomies?session={session_id}", content="{bad")
    assert response.status_code == 400
    assert response.json()["code"] == "corruptFile"


def test_entity_upload_reports_rejections(client):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    body = client.post(
        f"/api/entities?session={session_id}",
        content=json.dumps([
            {"id": "e1", "attributes": {}},
            {"id": "x1", "attributes": {"color": ["magenta"]}},
        ]),
    ).json()
    assert body["accepted"] == []
    assert len(body["rejected"]) == 2


def test_step_chain_over_http(client):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    job = _run_step(client, session_id, "prepare", {"plan": _plan()})
    assert job["status"] == "done"
    matrix_id = job["result"]
    job = _run_step(client, session_id, "embed",
                    {"artifact": matrix_id, "method": "mds", "dimension": 2})
    embed_id = job["result"]
    job = _run_step(client, session_id, "cluster",
                    {"artifact": matrix_id, "method": "bruteforce", "clusters": 2})
    cluster_id = job["result"]

    artifact = client.get(
        f"/api/sessions/{session_id}/artifacts/{cluster_id}"
    ).json()
    assert artifact["kind"] == "labels"
    assert set(artifact["payload"]["labels"]) <= {0, 1}
    assert artifact["provenance"]["inputs"] == [matrix_id]

    summary = client.get(f"/api/sessions/{session_id}").json()
    assert {a["id"] for a in summary["artifacts"]} == {matrix_id, embed_id, cluster_id}
    assert all(j["status"] == "done" for j in summary["jobs"])


def test_invalid_step_gets_400(client):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    response = client.post(
        f"/api/sessions/{session_id}/steps",
        json={"kind": "cluster", "params": {"artifact": "a99"}},
    )
    assert response.status_code == 404
    response = client.post(
        f"/api/sessions/{session_id}/steps",
        json={"kind": "warp", "params": {}},
    )
    assert response.status_code == 400
    body = response.json()
    assert body["code"] == "validation"
    assert body["context"] == {"kind": "warp"}


def test_job_ids_are_session_scoped(client):
    first = _new_session(client, "one")
    second = _new_session(client, "two")
    _load_fixtures(client, first)
    _load_fixtures(client, second)
    job_one = _run_step(client, first, "prepare", {"plan": _plan()})
    job_two = _run_step(client, second, "prepare", {"plan": _plan()})
    assert job_one["id"].startswith(f"{first}.")
    assert job_two["id"].startswith(f"{second}.")
    assert client.get("/api/jobs/nodot").status_code == 404
    assert client.get(f"/api/jobs/{first}.j99").status_code == 404


def test_entity_table(client):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    matrix_id = _run_step(client, session_id, "prepare", {"plan": _plan()})["result"]
    table = client.get(
        f"/api/sessions/{session_id}/entity-table?artifact={matrix_id}"
    ).json()
    assert table["columns"] == ["legwear", "color"]
    rows = {row["id"]: row for row in table["rows"]}
    assert rows["e1"]["references"] == {"catalog": "https://example.org/items/e1"}
    assert rows["e1"]["values"]["legwear"] == [
        {"id": "cycling-shorts", "label": "Cycling shorts"}
    ]
    assert rows["e7"]["values"]["legwear"] == []
    response = client.get(f"/api/sessions/{session_id}/entity-table")
    assert response.status_code == 400


def test_replay_endpoint(client):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    matrix_id = _run_step(client, session_id, "prepare", {"plan": _plan()})["result"]
    body = client.get(
        f"/api/sessions/{session_id}/artifacts/{matrix_id}/replay"
    ).json()
    assert body == {"id": matrix_id, "identical": True}


def test_report_endpoint(client):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    matrix_id = _run_step(client, session_id, "prepare", {"plan": _plan()})["result"]
    _run_step(client, session_id, "cluster",
              {"artifact": matrix_id, "method": "bruteforce", "clusters": 2})
    body = client.post(f"/api/sessions/{session_id}/report", json={}).json()
    assert "## Plans" in body["report"]
    assert "(labels)" in body["report"]


def test_save_and_load_round_trip(client, tmp_path):
    session_id = _new_session(client)
    _load_fixtures(client, session_id)
    _run_step(client, session_id, "prepare", {"plan": _plan()})
    path = str(tmp_path / "session.json")
    assert client.post(
        f"/api/sessions/{session_id}/save", json={"path": path}
    ).json() == {"path": path}

    fresh = _new_session(client, "empty")
    summary = client.post(
        f"/api/sessions/{fresh}/load", json={"path": path}
    ).json()
    assert summary["entityCount"] == 8
    assert summary["artifacts"] == [{"id": "a1", "kind": "distanceMatrix"}]
    # Loaded state is live: the artifact is readable through the new slot.
    artifact = client.get(f"/api/sessions/{fresh}/artifacts/a1").json()
    assert artifact["kind"] == "distanceMatrix"


def test_load_error_codes(client, tmp_path):
    session_id = _new_session(client)
    missing = str(tmp_path / "none.json")
    assert client.post(
        f"/api/sessions/{session_id}/load", json={"path": missing}
    ).status_code == 404

    corrupt = tmp_path / "corrupt.json"
    corrupt.write_text("{oops", encoding="utf-8")
    response = client.post(
        f"/api/sessions/{session_id}/load", json={"path": str(corrupt)}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "corruptFile"

    versioned = tmp_path / "versioned.json"
    versioned.write_text(json.dumps({"version": 2, "name": "x"}), encoding="utf-8")
    response = client.post(
        f"/api/sessions/{session_id}/load", json={"path": str(versioned)}
    )
    assert response.status_code == 409
    assert response.json()["code"] == "versionConflict"
