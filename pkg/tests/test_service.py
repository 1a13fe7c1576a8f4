import numpy as np
import pytest
from fastapi.testclient import TestClient

from vecdep.service.app import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def _simulate(client, **overrides):
    payload = {"family": "clayton", "theta": 2.0, "dims": [2, 2], "n": 50, "seed": 7}
    payload.update(overrides)
    return client.post("/v1/simulate", json=payload)


def _dataset(client, n=60):
    body = _simulate(client, n=n).json()
    return {"columns": body["columns"], "rows": body["rows"]}


GROUPS = {"groups": [{"name": "a", "columns": ["x1", "x2"]}, {"name": "b", "columns": ["y1", "y2"]}]}
COLLAPSE = {"kind": "weighted-average", "weights": [0.5, 0.5]}


class TestHealth:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "schema": "vecdep/1"}


class TestSimulate:
    def test_shape_and_schema(self, client):
        resp = _simulate(client)
        assert resp.status_code == 200
        body = resp.json()
        assert body["schema"] == "vecdep/1"
        assert body["columns"] == ["x1", "x2", "y1", "y2"]
        assert len(body["rows"]) == 50
        assert all(len(r) == 4 for r in body["rows"])

    def test_deterministic(self, client):
        assert _simulate(client).json() == _simulate(client).json()

    def test_seed_changes_output(self, client):
        assert _simulate(client, seed=8).json()["rows"] != _simulate(client).json()["rows"]

    def test_tau_parameterization(self, client):
        resp = _simulate(client, theta=None, tau=0.5)
        assert resp.status_code == 200

    def test_theta_and_tau_rejected(self, client):
        resp = _simulate(client, tau=0.5)
        assert resp.status_code == 400
        assert resp.json()["detail"]["code"] == "usage"

    def test_missing_theta_rejected(self, client):
        resp = _simulate(client, theta=None)
        assert resp.status_code == 400
        assert resp.json()["detail"]["code"] == "usage"

    def test_single_dim(self, client):
        body = _simulate(client, dims=[3]).json()
        assert body["columns"] == ["x1", "x2", "x3"]

    def test_scenario_comonotone(self, client):
        body = _simulate(client, family="comonotone", theta=None, dims=[2, 1]).json()
        assert body["columns"] == ["x1", "x2", "y1"]
        rows = np.asarray(body["rows"])
        # every margin shares the same underlying uniform draw
        assert np.corrcoef(rows[:, 0], rows[:, 2])[0, 1] == pytest.approx(1.0)

    def test_scenario_rejects_theta(self, client):
        resp = _simulate(client, family="comonotone", dims=[1, 1])
        assert resp.status_code == 400

    def test_validation_error_is_422(self, client):
        resp = client.post("/v1/simulate", json={"family": "clayton"})
        assert resp.status_code == 422


class TestCollapse:
    def test_basic(self, client):
        req = {"data": _dataset(client), "groups": GROUPS, "group": "a", "collapse": COLLAPSE}
        resp = client.post("/v1/collapse", json=req)
        assert resp.status_code == 200
        body = resp.json()
        assert body["schema"] == "vecdep/1"
        assert body["arity"] == "one-sample"
        assert body["n"] == 60 and body["k"] == 60
        assert len(body["values"]) == 60

    def test_pairwise_k(self, client):
        req = {
            "data": _dataset(client),
            "groups": GROUPS,
            "group": "a",
            "collapse": {"kind": "distance", "metric": "euclidean"},
        }
        body = client.post("/v1/collapse", json=req).json()
        assert body["arity"] == "pairwise"
        assert body["k"] == 60 * 59 // 2

    def test_unknown_group(self, client):
        req = {"data": _dataset(client), "groups": GROUPS, "group": "zz", "collapse": COLLAPSE}
        resp = client.post("/v1/collapse", json=req)
        assert resp.status_code == 400
        assert resp.json()["detail"]["code"] == "usage"

    def test_unknown_column_is_data_error(self, client):
        data = _dataset(client)
        groups = {"groups": [{"name": "a", "columns": ["nope"]}]}
        resp = client.post(
            "/v1/collapse", json={"data": data, "groups": groups, "group": "a", "collapse": COLLAPSE}
        )
        assert resp.status_code == 400
        assert resp.json()["detail"]["code"] == "data"


class TestMeasure:
    def test_pearson_with_asymptotic_ci(self, client):
        req = {
            "data": _dataset(client, n=200),
            "groups": GROUPS,
            "group_a": "a",
            "group_b": "b",
            "collapse": COLLAPSE,
            "measure": {"kind": "pearson"},
            "ci": "asymptotic",
        }
        body = client.post("/v1/measure", json=req).json()
        assert body["schema"] == "vecdep/1"
        assert body["measure"] == "pearson"
        assert -1.0 <= body["estimate"] <= 1.0
        lo, hi = body["ci"]
        assert lo <= body["estimate"] <= hi
        assert body["std_error"] > 0
        assert body["n"] == 200 and body["k"] == 200

    def test_bootstrap_deterministic(self, client):
        req = {
            "data": _dataset(client, n=80),
            "groups": GROUPS,
            "group_a": "a",
            "group_b": "b",
            "collapse": {"kind": "distance"},
            "measure": {"kind": "tau"},
            "ci": "bootstrap",
            "bootstrap_samples": 200,
            "seed": 3,
        }
        assert client.post("/v1/measure", json=req).json() == client.post("/v1/measure", json=req).json()

    def test_degenerate_maps_to_400(self, client):
        data = {"columns": ["x1", "x2", "y1", "y2"], "rows": [[1, 1, 1, 1]] * 20}
        req = {
            "data": data,
            "groups": GROUPS,
            "group_a": "a",
            "group_b": "b",
            "collapse": COLLAPSE,
            "measure": {"kind": "tau"},
        }
        resp = client.post("/v1/measure", json=req)
        assert resp.status_code == 400
        assert resp.json()["detail"]["code"] == "degenerate"


class TestAssess:
    def test_panels(self, client):
        req = {"data": _dataset(client), "groups": GROUPS, "collapse": COLLAPSE}
        body = client.post("/v1/assess", json=req).json()
        assert body["schema"] == "vecdep/1"
        assert len(body["panels"]) == 1
        panel = body["panels"][0]
        assert panel["group_a"] == "a" and panel["group_b"] == "b"
        assert len(panel["u_a"]) == body["k"] == 60
        assert all(0 < u < 1 for u in panel["u_a"])


class TestKendall:
    def test_univariate(self, client):
        req = {
            "family": "independence",
            "dims": [2],
            "mode": "univariate",
            "grid": [0.5],
        }
        body = client.post("/v1/kendall", json=req).json()
        assert body["schema"] == "vecdep/1"
        val = body["univariate"][0]["value"]
        assert val == pytest.approx(0.5 + 0.5 * np.log(2.0), abs=1e-12)

    def test_joint_grid(self, client):
        req = {
            "family": "clayton",
            "theta": 2.0,
            "dims": [2, 2],
            "mode": "joint",
            "grid": [0.25, 0.75],
        }
        body = client.post("/v1/kendall", json=req).json()
        assert len(body["grid"]) == 4
        assert all(0.0 <= pt["value"] <= 1.0 for pt in body["grid"])

    def test_sample(self, client):
        req = {
            "family": "gumbel",
            "tau": 0.5,
            "dims": [2, 3],
            "mode": "sample",
            "n": 40,
            "seed": 5,
        }
        body = client.post("/v1/kendall", json=req).json()
        sample = np.asarray(body["sample"])
        assert sample.shape == (40, 2)
        assert ((sample > 0) & (sample < 1)).all()
        assert body["theta"] == pytest.approx(2.0)

    def test_sample_needs_n(self, client):
        req = {"family": "gumbel", "theta": 2.0, "dims": [2, 2], "mode": "sample"}
        resp = client.post("/v1/kendall", json=req)
        assert resp.status_code == 400
        assert resp.json()["detail"]["code"] == "usage"

    def test_univariate_needs_single_dim(self, client):
        req = {"family": "independence", "dims": [2, 2], "mode": "univariate"}
        assert client.post("/v1/kendall", json=req).status_code == 400


class TestRolling:
    def test_rows(self, client):
        req = {
            "data": _dataset(client, n=100),
            "groups": GROUPS,
            "group_a": "a",
            "group_b": "b",
            "collapse": COLLAPSE,
            "window": 40,
            "step": 10,
        }
        body = client.post("/v1/rolling", json=req).json()
        assert body["schema"] == "vecdep/1"
        ends = [r["window_end"] for r in body["rows"]]
        assert ends == list(range(40, 101, 10))
        assert all(r["ci_lo"] is None for r in body["rows"])

    def test_window_too_large(self, client):
        req = {
            "data": _dataset(client, n=30),
            "groups": GROUPS,
            "group_a": "a",
            "group_b": "b",
            "collapse": COLLAPSE,
            "window": 31,
        }
        assert client.post("/v1/rolling", json=req).status_code == 400
