import pytest
from fastapi.testclient import TestClient

from lteu_coex.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


REDUCED = {"n": 5, "cw0": 4, "m_retries": 2, "payload_bits": 2048,
           "phy_rate_bps": 10_000_000.0}


class TestHealth:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}


class TestSolve:
    def test_default_solution(self, client):
        data = client.post("/solve", json={}).json()
        assert data["p_c"] == pytest.approx(0.47135, abs=2e-4)
        assert data["t_s_slots"] == 1050
        assert data["t_c_slots"] == 36
        assert data["mean_td_ms"] == pytest.approx(3.295, abs=0.01)

    def test_lambda_alias_accepted(self, client):
        body = {"params": {"lambda": 0.2, "n": 9}}
        assert client.post("/solve", json=body).status_code == 200

    def test_bad_params_rejected(self, client):
        resp = client.post("/solve", json={"params": {"cw0": 12}})
        assert resp.status_code == 400
        assert "power of two" in resp.json()["detail"]


class TestRun:
    def test_run_and_reference(self, client):
        run = client.post("/run", json={
            "params": REDUCED, "period_ms": 1.8, "duty": 0.3, "q": 1.0,
            "mode": "strong", "packets": 3_000, "warmup_packets": 100,
            "seed": 4}).json()
        ref = client.post("/reference", json={
            "params": REDUCED, "packets": 3_000, "warmup_packets": 100,
            "seed": 4}).json()
        assert run["mean_d"] > ref["mean_d"]
        assert 0.0 <= run["drop_rate"] <= 1.0
        assert run["packets_used"] == 2_900

    def test_validation_422(self, client):
        assert client.post("/run", json={"duty": 2.0}).status_code == 422

    def test_domain_error_400(self, client):
        resp = client.post("/run", json={"duty": 1.0, "mode": "strong",
                                         "packets": 50, "warmup_packets": 0})
        assert resp.status_code == 400
        assert "alpha = 1" in resp.json()["detail"]


class TestSweep:
    def test_rows_shape(self, client):
        resp = client.post("/sweep", json={
            "variable": "q", "values": [0.0, 1.0], "regimes": ["weak"],
            "params": REDUCED, "stations": 5, "payload_bytes": 256,
            "period_ms": 0.9, "alpha": 0.3, "packets": 1_500,
            "warmup_packets": 100, "seed": 2})
        rows = resp.json()["rows"]
        assert [r["q"] for r in rows] == [0.0, 1.0]
        assert rows[0]["phi_r"] <= rows[1]["phi_r"]
        assert all(r["error"] == "" for r in rows)


class TestExact:
    def test_rows_and_aggregates(self, client):
        resp = client.post("/exact", json={
            "params": REDUCED, "period_slots": 60, "alpha": 0.3, "q": 1.0,
            "mode": "weak"})
        data = resp.json()
        assert len(data["rows"]) == 60
        pis = [r["pi"] for r in data["rows"]]
        assert sum(pis) == pytest.approx(1.0, abs=1e-9)
        assert data["e_d"] >= 45
        assert 0.0 <= data["drop_rate"] <= 1.0

    def test_budget_400(self, client):
        resp = client.post("/exact", json={"period_slots": 5, "max_paths": 10})
        assert resp.status_code == 400
        assert "budget" in resp.json()["detail"]


class TestValidate:
    def test_small_bss(self, client):
        resp = client.post("/validate", json={
            "params": {"n": 5, "cw0": 16, "m_retries": 6, "payload_bits": 8192},
            "horizon_slots": 2_000_000, "seed": 3})
        data = resp.json()
        assert data["p_c_ok"] is True
        assert data["td_pmf_ok"] is True
        assert data["passed"] is True
        assert data["empirical_p_c"] == pytest.approx(data["solved_p_c"], abs=0.01)
