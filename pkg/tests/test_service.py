import json

import pytest
from fastapi.testclient import TestClient

from tegcer.service import MAX_SOURCE_BYTES, create_app


@pytest.fixture(scope="module")
def client(trained):
    app = create_app(trained["model"], trained["index"],
                     compiler=trained["compiler"])
    return TestClient(app)


@pytest.fixture(scope="module")
def no_model_client():
    return TestClient(create_app(None, None))


class TestFeedback:
    def test_clean_program(self, client, synth_corpus):
        repaired = synth_corpus["pairs"][0].repaired
        r = client.post("/api/feedback", json={"source": repaired})
        assert r.status_code == 200
        body = r.json()
        assert body["compiled_ok"] is True
        assert body["suggestions"] == []

    def test_buggy_program_has_suggestions(self, client, synth_corpus):
        r = client.post("/api/feedback", json={"source": synth_corpus["demo_source"]})
        assert r.status_code == 200
        body = r.json()
        assert body["compiled_ok"] is False
        assert len(body["suggestions"]) == 3
        for s in body["suggestions"]:
            assert s["examples"] and s["line_token"]
            assert s["diagnostics"]

    def test_oversized_body(self, client):
        r = client.post("/api/feedback",
                        json={"source": "x" * (MAX_SOURCE_BYTES + 1)})
        assert r.status_code == 400

    def test_malformed_body(self, client):
        r = client.post("/api/feedback", content=b"not json",
                        headers={"content-type": "application/json"})
        assert r.status_code == 400

    def test_no_model_503(self, no_model_client):
        r = no_model_client.post("/api/feedback", json={"source": "int x;"})
        assert r.status_code == 503

    def test_replay_deterministic(self, client, synth_corpus):
        req = {"source": synth_corpus["demo_source"]}
        a = client.post("/api/feedback", json=req).json()
        b = client.post("/api/feedback", json=req).json()
        # identical apart from the opaque tokens
        for s in a["suggestions"] + b["suggestions"]:
            s.pop("line_token")
        assert a == b


class TestExamples:
    def test_pagination(self, client, synth_corpus):
        r = client.post("/api/feedback",
                        json={"source": synth_corpus["demo_source"]}).json()
        token = r["suggestions"][0]["line_token"]
        first = r["suggestions"][0]["examples"]
        page2 = client.get("/api/examples",
                           params={"line_token": token, "offset": 1})
        assert page2.status_code == 200
        body = page2.json()
        assert len(body["examples"]) == 1
        assert body["examples"] != first

    def test_unknown_token_404(self, client):
        r = client.get("/api/examples", params={"line_token": "nope", "offset": 0})
        assert r.status_code == 404

    def test_cap_410(self, client, synth_corpus):
        r = client.post("/api/feedback",
                        json={"source": synth_corpus["demo_source"]}).json()
        token = r["suggestions"][0]["line_token"]
        resp = client.get("/api/examples",
                          params={"line_token": token, "offset": 10})
        assert resp.status_code == 410


class TestHealth:
    def test_ok(self, client, trained):
        r = client.get("/api/health")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok"
        assert body["class_count"] == len(trained["model"].class_table)
        assert body["model_version"] == 1

    def test_no_model(self, no_model_client):
        assert no_model_client.get("/api/health").status_code == 503
