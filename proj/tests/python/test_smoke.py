import json
import math
import os

import pytest

import warpcheck as wc

SCENES = os.environ.get(
    "WARPCHECK_SCENE_DIR",
    os.path.join(os.path.dirname(__file__), "..", "..", "scenes"),
)


def test_version_and_catalogs():
    assert wc.__version__ == "0.1.0"
    assert "general_inequality" in wc.check_names()
    assert any(k.startswith("sphere") for k in wc.warped_catalog_keys())
    assert wc.ambient_catalog_keys()


def test_sphere_chart_equality():
    data, ratio = wc.chart_data("sphere-in-euclidean(2)", [0.3, 1.1])
    report = wc.general_inequality(data, chart_lhs=ratio, equality_tol=1e-3)
    assert report.lhs_source == "chart"
    assert abs(report.lhs - 1.0) < 1e-3
    assert abs(report.values["mean_term"] - 1.0) < 1e-3
    assert report.equality and report.mixed_totally_geodesic and report.partial_mean_equal


def test_random_data_satisfies_the_inequality():
    amb = wc.make_ambient("non-sasakian-kmu(3,0.3,1.5)")
    for stream in range(200):
        data = wc.random_data(amb, 2, 2, seed=7, stream=stream)
        assert wc.general_inequality(data).gap >= -1e-9


def test_random_data_is_reproducible():
    amb = wc.make_ambient("euclidean(6)")
    a = wc.random_data(amb, 2, 2, seed=3, stream=1)
    b = wc.random_data(amb, 2, 2, seed=3, stream=1)
    assert a.sigma == b.sigma


def test_equality_and_perturbation():
    amb = wc.make_ambient("euclidean(6)")
    data = wc.random_data(amb, 2, 2, kind="equality", seed=1)
    assert wc.general_inequality(data).equality
    data.perturb_cross(0, 0, 3, 1e-2)
    r = wc.general_inequality(data)
    assert not r.equality and r.gap >= 1e-5


def test_decomposition_identities():
    amb = wc.make_ambient("sasakian-space-form(3,-1)")
    d = wc.decompose(wc.random_data(amb, 1, 3, seed=2))
    assert abs(d["a_i_residual"]) < 1e-9
    assert d["lemma_margin"] >= -1e-9


def test_lemma():
    r = wc.chen_lemma([1.0, 2.0, 3.0, 3.0])
    assert r["holds"] and r["equality"]
    assert math.isclose(r["b"], 4.0)
    with pytest.raises(wc.WarpcheckError):
        wc.chen_lemma([1.0, 2.0, 3.0], b=0.0)


def test_specialized_inequalities_and_obstruction():
    amb = wc.make_ambient("sasakian-space-form(3,-4)")
    leaf = wc.dplus_leaf(amb, 1, 2)
    assert leaf.is_c_totally_real()
    rep = wc.kmu_space_form_inequality(leaf, -4.0)
    assert rep.values["specialization_residual"] < 1e-12
    out = wc.obstruction_check(rep, harmonic=True, minimal=True)
    assert out["verdict"] == "NONEXISTENCE"

    ns = wc.make_ambient("non-sasakian-kmu(4,0.2,1.0)")
    data = wc.random_data(ns, 2, 2, kind="c-totally-real", seed=4)
    r = wc.non_sasakian_inequality(data)
    assert r.values["specialization_residual"] < 1e-9 * max(1.0, abs(r.rhs))
    assert "rhs_opposite_sign" in r.values


def test_pointwise_data_and_errors():
    amb = wc.make_ambient("euclidean(3)")
    data = wc.pointwise_data(amb, 1, 1, sigma=[[[1.0, 0.0], [0.0, 1.0]]])
    assert wc.general_inequality(data).equality
    with pytest.raises(wc.WarpcheckError):
        wc.pointwise_data(amb, 1, 1, sigma=[[[1.0, 0.5], [0.0, 1.0]]])
    with pytest.raises(wc.WarpcheckError):
        wc.make_ambient("non-sasakian-kmu(2,1,0)")


def test_laplacian_ratio():
    r = wc.laplacian_ratio("hyperbolic(2)", [0.1, 0.2, 0.3])
    assert abs(r["laplacian_ratio"] + 1.0) < 1e-5
    assert r["max_deviation"] < 1e-3


def test_scene_round_trip_and_run():
    path = os.path.join(SCENES, "sphere.json")
    code, report = wc.verify_scene(path)
    assert code == 0
    doc = json.loads(report)
    assert doc["records"][0]["name"] == "general_inequality"
    assert doc["summary"]["pass"] is True
    again = wc.verify_scene(path)[1]
    assert again == report
    echo = wc.echo_scene(path)
    assert json.loads(echo)["ambient"] == "euclidean(3)"
    code, text = wc.verify_scene_string(echo, output="text")
    assert code == 0 and "PASS" in text


def test_invalid_scene():
    with pytest.raises(wc.WarpcheckError, match="validation"):
        wc.verify_scene(os.path.join(SCENES, "invalid", "unknown_key.json"))
