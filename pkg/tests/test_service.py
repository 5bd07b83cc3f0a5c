import math

import pytest
from fastapi.testclient import TestClient

from momentpoly.service.app import app

client = TestClient(app)

BERNOULLI = {"labels": ["x0", "x1"], "C": ["0", "0"], "F": [["0"], ["1"]]}
HALF_STEP = {"labels": ["a", "b"], "C": ["0", "0"], "F": [["0"], ["1/2"]]}


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_family_show_bernoulli():
    r = client.post("/family/show", json={"family": BERNOULLI, "theta": [0.0]})
    assert r.status_code == 200
    body = r.json()
    assert body["psi"] == pytest.approx(math.log(2))
    assert body["eta"] == [pytest.approx(0.5)]
    assert body["fisher"] == [[pytest.approx(0.25)]]


def test_family_show_defaults_theta_to_zero():
    r = client.post("/family/show", json={"binomial_n": 2})
    assert r.status_code == 200
    assert r.json()["eta"] == [pytest.approx(1.0)]


def test_family_hull():
    r = client.post("/family/hull", json={"binomial_n": 3})
    assert r.status_code == 200
    body = r.json()["polytope"]
    assert body["units"] == "plain"
    assert body["vertices"] == [["0"], ["3"]]
    assert body["decimal"] == [[0.0], [3.0]]


def test_verify_theorem_binomial():
    r = client.post("/verify/theorem", json={"binomial_n": 4})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    names = [rep["name"] for rep in body["reports"]]
    assert "theorem_moment_polytope" in names and "torification_consistency" in names
    assert body["polytope"]["vertices"] == [["-4"], ["0"]]


def test_verify_corollary_integral_family():
    r = client.post("/verify/corollary", json={"family": BERNOULLI})
    assert r.status_code == 200
    assert r.json()["passed"] is True


def test_verify_corollary_fractional_family_fails_with_witness():
    r = client.post("/verify/corollary", json={"family": HALF_STEP})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is False
    witness = body["reports"][0]["witnesses"][0]
    assert "1/2" in witness["actual"]
    assert any("non-integral" in note for note in body["reports"][0]["notes"])


def test_verify_identity_seeded():
    r = client.post("/verify/identity", json={"binomial_n": 3, "samples": 25, "seed": 7})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert "25/25 exact" in body["reports"][0]["witnesses"][0]["actual"]


def test_verify_kahler_family_subset():
    r = client.post("/verify/kahler", json={"family": BERNOULLI, "count": 2})
    assert r.status_code == 200
    names = [rep["name"] for rep in r.json()["reports"]]
    assert names == ["kahler_closedness", "hamiltonian_tube", "hamiltonian_pm"]
    assert r.json()["passed"] is True


def test_verify_kahler_binomial_runs_veronese_suites():
    r = client.post("/verify/kahler", json={"binomial_n": 2, "count": 2})
    assert r.status_code == 200
    names = [rep["name"] for rep in r.json()["reports"]]
    for expected in (
        "veronese_equivariance",
        "veronese_k_map_law",
        "momentum_factorization",
        "veronese_pullback_isometry",
        "line_momentum_endpoints",
    ):
        assert expected in names
    assert r.json()["passed"] is True


def test_example_binomial_full_pipeline():
    r = client.post("/example/binomial", json={"n": 5, "samples": 20, "count": 3})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert body["display"].startswith("[-5, 0]")
    assert body["polytope"]["units"] == "4pi"
    assert body["polytope"]["decimal"][0][0] == pytest.approx(-20 * math.pi)


def test_validation_error_names_offending_field():
    bad = {"labels": ["x0", "x1"], "C": ["0", "nan"], "F": [["0"], ["1"]]}
    r = client.post("/verify/theorem", json={"family": bad})
    assert r.status_code == 422
    assert "C[1]" in r.json()["detail"]


def test_missing_input_source_rejected():
    r = client.post("/verify/theorem", json={})
    assert r.status_code == 422
    assert "input" in r.json()["detail"]
    r = client.post("/verify/theorem", json={"family": BERNOULLI, "binomial_n": 2})
    assert r.status_code == 422


def test_rank_deficient_family_rejected():
    bad = {"labels": ["a", "b", "c"], "C": ["0", "0", "0"], "F": [["1"], ["1"], ["1"]]}
    r = client.post("/family/show", json={"family": bad})
    assert r.status_code == 422
    assert "dependent" in r.json()["detail"]


def test_identical_requests_give_identical_documents():
    req = {"n": 3, "samples": 10, "count": 2, "seed": 99}
    a = client.post("/example/binomial", json=req).text
    b = client.post("/example/binomial", json=req).text
    assert a == b


def test_c_offset_validation():
    r = client.post("/verify/theorem", json={"binomial_n": 2, "c_offset": ["1/3", "0"]})
    assert r.status_code == 422
    assert "c_offset" in r.json()["detail"]
    r = client.post("/verify/theorem", json={"binomial_n": 2, "c_offset": ["nope"]})
    assert r.status_code == 422
    r = client.post("/verify/theorem", json={"binomial_n": 2, "c_offset": ["1/3"]})
    assert r.status_code == 200 and r.json()["passed"] is True


def test_negative_tolerance_rejected_by_model():
    r = client.post("/verify/kahler", json={"binomial_n": 2, "tol_check": -1.0})
    assert r.status_code == 422
