"""The named suite runners: shapes, applicability, budget behavior."""

import pytest

from semipolar.errors import DimensionMismatch, EnumerationTooLarge
from semipolar.suites import SUITES, SuiteConfig, applicable_suites, run_suite


def test_all_suites_pass_on_the_scalar_instance(sp_m1_gf3):
    cfg = SuiteConfig()
    for name in applicable_suites(sp_m1_gf3, cfg):
        report = run_suite(name, sp_m1_gf3, cfg)
        assert report["passed"], (name, report["checks"])
        assert report["suite"] == name
        assert report["mode"] == "exhaustive"
        for check in report["checks"]:
            assert set(check) == {"name", "passed", "witness", "note"}


def test_applicable_suites_scalar_vs_vector(sp_m1_gf3, sp_cross_gf3, sp_m2_gf3):
    cfg = SuiteConfig()
    small = applicable_suites(sp_m1_gf3, cfg)
    assert "oracle" in small and "metric" in small and "bisectors" in small
    vector = applicable_suites(sp_cross_gf3, cfg)
    assert "metric" not in vector and "oracle" not in vector
    assert "axioms" in vector and "gamma" in vector
    big_scalar = applicable_suites(sp_m2_gf3, cfg)
    assert "metric" in big_scalar and "oracle" not in big_scalar
    assert applicable_suites(None, cfg) == ["hyperbolic"]


def test_vector_instance_spot_suites(sp_cross_gf3):
    cfg = SuiteConfig()
    for name in ("dset", "joinable", "triangles", "pencil", "autos"):
        report = run_suite(name, sp_cross_gf3, cfg)
        assert report["passed"], (name, report["checks"])
    assert run_suite("triangles", sp_cross_gf3, cfg)["data"]["census"] == 0


def test_m2_metric_and_bisector_suites(sp_m2_gf3):
    cfg = SuiteConfig()
    metric = run_suite("metric", sp_m2_gf3, cfg)
    assert metric["passed"]
    assert metric["data"]["witness"]["before"] != metric["data"]["witness"]["after"]
    bis = run_suite("bisectors", sp_m2_gf3, cfg)
    assert bis["passed"]
    assert bis["data"]["hyperplane_size"] == 81
    # the pair-of-pairs criterion sweep is desk-scale only
    assert "pair_groups_t" not in bis["data"]


def test_bisector_pair_groups_on_small_instance(sp_m1_gf3):
    report = run_suite("bisectors", sp_m1_gf3, SuiteConfig())
    # 27 equal-pair masks collapse to one group (whole space); nonzero classes:
    # one group per direction class of Y plus the whole-space group
    assert report["data"]["pair_groups_t"] == 13 + 1
    # m-groups: one per point sum
    assert report["data"]["pair_groups_m"] == 27


def test_scalar_only_suites_reject_vector_instances(sp_cross_gf3):
    for name in ("metric", "bisectors"):
        with pytest.raises(DimensionMismatch):
            run_suite(name, sp_cross_gf3, SuiteConfig())


def test_budget_propagates(sp_m1_gf3):
    with pytest.raises(EnumerationTooLarge):
        run_suite("identities", sp_m1_gf3, SuiteConfig(budget=10))
    with pytest.raises(EnumerationTooLarge):
        run_suite("recover", sp_m1_gf3, SuiteConfig(budget=10))


def test_sampling_thins_loops(sp_m1_gf3):
    cfg = SuiteConfig(budget=10, sample=5, seed=3)
    report = run_suite("recover", sp_m1_gf3, cfg)
    assert report["passed"]
    assert report["mode"] == {"sample": 5, "seed": 3}


def test_unknown_suite_raises():
    with pytest.raises(KeyError):
        run_suite("bogus", None, SuiteConfig())
    assert set(SUITES) == {
        "axioms", "identities", "gamma", "lines", "dset", "joinable", "triangles",
        "recover", "pencil", "autos", "oracle", "metric", "bisectors", "hyperbolic",
    }


def test_hyperbolic_suite_without_instance():
    report = run_suite("hyperbolic", None, SuiteConfig(field=3))
    assert report["passed"]
    assert report["data"]["reconstruction"]["class_count"] == 13
    with pytest.raises(DimensionMismatch):
        run_suite("axioms", None, SuiteConfig())
