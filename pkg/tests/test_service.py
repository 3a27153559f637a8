import pytest
from fastapi.testclient import TestClient

from agmlift.padic import PadicField
from agmlift.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_count_endpoint(client):
    r = client.post("/count", json={"d": 1, "a2": "0", "a6": "1"})
    assert r.status_code == 200
    body = r.json()
    assert body["trace"] == -1 and body["order"] == 4 and body["verified"]


def test_count_random_is_deterministic(client):
    a = client.post("/count", json={"d": 3, "random": True, "rng_seed": 11}).json()
    b = client.post("/count", json={"d": 3, "random": True, "rng_seed": 11}).json()
    assert a == b


def test_count_invalid_curve(client):
    r = client.post("/count", json={"d": 1, "a2": "0", "a6": "0"})
    assert r.status_code == 400
    assert "error" in r.json()
    r2 = client.post("/count", json={"d": 1, "a2": "zz", "a6": "1"})
    assert r2.status_code == 400
    r3 = client.post("/count", json={"d": 1})
    assert r3.status_code == 400


def test_count_batch_preserves_order(client):
    curves = [
        {"d": 1, "a2": "0", "a6": "1"},
        {"d": 1, "a2": "1", "a6": "1"},
        {"d": 2, "a2": "0", "a6": "1"},
    ]
    r = client.post("/count/batch", json={"curves": curves})
    assert r.status_code == 200
    got = r.json()["results"]
    assert [x["order"] for x in got] == [4, 2, 8]
    assert [x["a2"] for x in got] == ["0", "1", "0"]


def test_lift_endpoint_round_trip(client):
    r = client.post("/lift", json={"g": 1, "d": 2, "seed": ["2"], "precision": 16})
    assert r.status_code == 200
    body = r.json()
    assert body["residual_valuation"] >= 16
    # the emitted coordinates re-parse to the exact in-memory values
    F = PadicField(2, 16)
    from agmlift.canlift import lift_canonical

    res = lift_canonical(1, F, 2, 16)
    assert [F.element_from_json(c) for c in body["point"]] == res.point.coords_list()
    assert F.element_from_json(body["omega"]) == res.omega


def test_lift_errors(client):
    r = client.post("/lift", json={"g": 1, "d": 1, "seed": ["0"], "precision": 8})
    assert r.status_code == 422
    r2 = client.post("/lift", json={"g": 1, "d": 1, "seed": ["1", "1"], "precision": 8})
    assert r2.status_code == 400


def test_agm_endpoint(client):
    r = client.post(
        "/agm", json={"g": 1, "d": 1, "start": [1, 17], "steps": 2, "precision": 12}
    )
    assert r.status_code == 200
    body = r.json()
    assert len(body["steps"]) == 2
    assert body["ratios"][0] == ["1"]
    assert all(s["in_disc_g_plus_2"] for s in body["steps"])


def test_agm_rejects_bad_start(client):
    r = client.post("/agm", json={"g": 1, "d": 1, "start": [1, 3], "steps": 1})
    assert r.status_code == 422
    r2 = client.post("/agm", json={"g": 1, "d": 1, "start": [1, 9, 17], "steps": 1})
    assert r2.status_code == 400


def test_agm_budget_failure(client):
    r = client.post(
        "/agm", json={"g": 1, "d": 1, "start": [1, 17], "steps": 30, "precision": 12}
    )
    assert r.status_code == 422


def test_verify_endpoint_level2_and_level4(client):
    lift = client.post("/lift", json={"g": 1, "d": 1, "seed": ["1"], "precision": 20}).json()
    ver = client.post(
        "/verify",
        json={
            "g": 1,
            "d": 1,
            "N": 20,
            "level_exp": 1,
            "point": lift["point"],
            "omega": lift["omega"],
        },
    ).json()
    assert ver["min_valuation"] is None  # vanishes at working precision
    assert ver["point_canonical_mod2"] is True
    # a wrong scale breaks the relations
    bad = client.post(
        "/verify",
        json={
            "g": 1,
            "d": 1,
            "N": 20,
            "level_exp": 1,
            "point": lift["point"],
            "omega": ["1"],
        },
    ).json()
    assert bad["min_valuation"] is not None


def test_verify_level4_closed_form(client):
    from agmlift.padic import newton_root

    Z = PadicField(1, 32)
    w = newton_root(Z, [1, 1, 2], 5)
    x1 = w * (1 + w.shift_up(1))
    doc = {
        "g": 1,
        "d": 1,
        "N": 32,
        "level_exp": 2,
        "point": [Z.one().to_json(), x1.to_json(), w.shift_up(1).to_json(), x1.to_json()],
        "omega": w.to_json(),
    }
    ver = client.post("/verify", json=doc).json()
    assert ver["min_valuation"] is None
    assert len(ver["relations"]) == 6
    assert all(rel["v"] is not None for rel in ver["relations"])


def test_selftest_endpoint_subset(client):
    r = client.post("/selftest", json={"only": ["transform_matrix", "level4_closed_form"]})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert [i["name"] for i in body["items"]] == ["transform_matrix", "level4_closed_form"]


def test_selftest_unknown_item(client):
    r = client.post("/selftest", json={"only": ["nope"]})
    assert r.status_code in (400, 422)
