"""HTTP service exercised through the in-process test client."""

import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from fspde_split import __version__
from fspde_split.noise import sample_noise_lattice
from fspde_split.service.app import create_app
from fspde_split.service.models import StudyRequest
from fspde_split.study import convergence_study


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def _study_payload(**overrides):
    payload = {
        "T": 1.0,
        "N": 4,
        "eps": 1.0,
        "hurst": 0.7,
        "seed": 5,
        "drift": {"f": "poly_odd", "g": "identity", "q": 1},
        "L_ref": 16,
        "L_list": [4, 8],
        "M": 4,
    }
    payload.update(overrides)
    return payload


def _wait_done(client, job_id, timeout=120.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        body = client.get(f"/studies/{job_id}").json()
        if body["status"] in ("done", "failed"):
            return body
        time.sleep(0.05)
    raise AssertionError("study did not finish in time")


class TestHealth:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "version": __version__}


class TestNoiseEndpoint:
    def test_matches_direct_sampler(self, client):
        resp = client.post(
            "/noise/sample", json={"modes": 2, "steps": 8, "hurst": 0.5, "seed": 3}
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["dt"] == 1 / 8
        direct = sample_noise_lattice(2, 8, 0.5, 1 / 8, seed=3).increments
        np.testing.assert_array_equal(np.asarray(body["increments"]), direct)

    def test_size_guard(self, client):
        resp = client.post(
            "/noise/sample", json={"modes": 2, "steps": (1 << 20), "hurst": 0.5}
        )
        assert resp.status_code == 413

    def test_validation(self, client):
        resp = client.post("/noise/sample", json={"modes": 1, "steps": 4, "hurst": 1.5})
        assert resp.status_code == 422


class TestLemmasEndpoint:
    def test_fast_battery(self, client):
        resp = client.post("/lemmas/verify", json={"hurst": 0.7, "fast": True})
        assert resp.status_code == 200
        body = resp.json()
        assert body["passed"] is True
        assert len(body["checks"]) == 5
        assert {c["lemma"] for c in body["checks"]} == {
            "moment-decay",
            "moment-saturation",
            "discrete-decay",
            "error-decay",
            "increment-growth",
        }


class TestStudiesEndpoint:
    def test_submit_poll_and_report(self, client):
        resp = client.post("/studies", json=_study_payload())
        assert resp.status_code == 202
        job_id = resp.json()["job_id"]
        assert resp.json()["status"] == "queued"

        body = _wait_done(client, job_id)
        assert body["status"] == "done"
        assert body["error"] is None
        report = body["report"]

        local = convergence_study(StudyRequest.model_validate(_study_payload()).to_study_config())
        assert report["rms_error"] == list(local.rms_error)
        assert report["std_error"] == list(local.std_error)
        assert report["slope"] == local.slope
        assert report["config"]["L_ref"] == 16

    def test_slope_band_verdict(self, client):
        resp = client.post("/studies", json=_study_payload(slope_band=[-5.0, 5.0]))
        body = _wait_done(client, resp.json()["job_id"])
        assert body["passed"] is True

        resp = client.post("/studies", json=_study_payload(slope_band=[10.0, 11.0]))
        body = _wait_done(client, resp.json()["job_id"])
        assert body["passed"] is False

    def test_output_files(self, client, tmp_path):
        resp = client.post("/studies", json=_study_payload(output=str(tmp_path)))
        body = _wait_done(client, resp.json()["job_id"])
        assert body["status"] == "done"
        assert set(body["files"]) == {"rates_csv", "report_json", "rates_gp"}
        assert (tmp_path / "rates.csv").exists()

    def test_unknown_job_is_404(self, client):
        assert client.get("/studies/no-such-job").status_code == 404

    def test_pydantic_validation_is_422(self, client):
        resp = client.post("/studies", json=_study_payload(hurst=0.2))
        assert resp.status_code == 422

    def test_config_assembly_errors_are_422(self, client):
        # valid request shape, but x0 length contradicts N
        resp = client.post("/studies", json=_study_payload(x0=[0.1, 0.2]))
        assert resp.status_code == 422

    def test_listing_contains_submitted_jobs(self, client):
        first = client.post("/studies", json=_study_payload()).json()["job_id"]
        second = client.post("/studies", json=_study_payload(seed=6)).json()["job_id"]
        _wait_done(client, first)
        _wait_done(client, second)
        listed = client.get("/studies").json()
        ids = [row["job_id"] for row in listed]
        assert first in ids and second in ids
        assert all(row["hurst"] == 0.7 for row in listed)
        stamps = [row["submitted_at"] for row in listed]
        assert stamps == sorted(stamps)
