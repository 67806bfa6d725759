"""Tests for the seeded verification harness."""

import numpy as np
import pytest

from spheretc.action import CyclicLinearAction
from spheretc.verify import (
    VerifyConfig,
    run_verify,
    standard_suite,
    uniform_sphere_sampler,
)

SMALL = VerifyConfig(seed=7, samples=5000, pair_samples=500, t_grid=101)


class TestSampler:
    def test_unit_norms(self):
        pts = uniform_sphere_sampler(0, 5, 10_000)
        assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) <= 1e-12

    def test_componentwise_mean_small(self):
        pts = uniform_sphere_sampler(1, 4, 100_000)
        assert np.max(np.abs(pts.mean(axis=0))) <= 0.02

    def test_same_seed_same_stream(self):
        a = uniform_sphere_sampler(42, 3, 1000)
        b = uniform_sphere_sampler(42, 3, 1000)
        assert np.array_equal(a, b)
        c = uniform_sphere_sampler(43, 3, 1000)
        assert not np.array_equal(a, c)

    def test_zero_sphere(self):
        pts = uniform_sphere_sampler(2, 1, 100)
        assert set(np.unique(pts)) == {-1.0, 1.0}

    def test_dim_validation(self):
        with pytest.raises(ValueError):
            uniform_sphere_sampler(0, 0, 10)


class TestConfig:
    def test_tolerances_positive(self):
        with pytest.raises(ValueError):
            VerifyConfig(endpoint_tol=0.0)

    def test_to_dict_shape(self):
        d = VerifyConfig().to_dict()
        assert d["tolerances"]["equivariance"] == 1e-9
        assert d["samples"] == 100_000


class TestRunVerify:
    def test_two_domain_action_passes(self):
        report = run_verify(CyclicLinearAction(p=3, fixed_dim=2, weights=(1,)),
                            "two", SMALL)
        assert report.passed
        names = [c.name for c in report.checks]
        for expected in ("coverage", "endpoint", "unit_norm", "equivariance",
                         "domain_invariance", "tangency", "continuity",
                         "oracle_consistency"):
            assert expected in names

    def test_three_domain_action_passes(self):
        report = run_verify(CyclicLinearAction(p=2, fixed_dim=2, sign_dim=1),
                            "three", SMALL)
        assert report.passed
        oracle = next(c for c in report.checks if c.name == "oracle_consistency")
        assert oracle.worst == 3.0  # three domains witness the upper bound

    def test_hemisphere_k0_passes(self):
        report = run_verify(CyclicLinearAction(p=2, fixed_dim=1, sign_dim=2),
                            "auto", SMALL)
        assert report.planner == "hemisphere"
        assert report.passed

    def test_parity_mismatch_recorded_not_raised(self):
        report = run_verify(CyclicLinearAction(p=2, fixed_dim=2, sign_dim=1),
                            "two", SMALL)
        assert not report.passed
        first = report.checks[0]
        assert first.name == "planner_precondition"
        assert first.witness["error"] == "ParityMismatch"

    def test_free_action_recorded(self):
        report = run_verify(CyclicLinearAction(p=2, fixed_dim=0, sign_dim=3),
                            "auto", SMALL)
        assert not report.passed
        assert report.checks[0].witness["error"] == "NoFixedPoint"

    def test_replay_is_byte_identical(self):
        a = CyclicLinearAction(p=3, fixed_dim=2, weights=(1,))
        r1 = run_verify(a, "two", SMALL)
        r2 = run_verify(a, "two", SMALL)
        assert r1.to_json(include_timing=False) == r2.to_json(include_timing=False)

    def test_different_seeds_differ(self):
        a = CyclicLinearAction(p=3, fixed_dim=2, weights=(1,))
        r1 = run_verify(a, "two", SMALL)
        r2 = run_verify(a, "two", VerifyConfig(seed=8, samples=5000,
                                               pair_samples=500, t_grid=101))
        assert r1.to_json(False) != r2.to_json(False)

    def test_failed_check_carries_witness(self):
        # an absurd tolerance forces a failure; the witness must reproduce it
        a = CyclicLinearAction(p=3, fixed_dim=2, weights=(1,))
        tight = VerifyConfig(seed=7, samples=1000, pair_samples=200, t_grid=51,
                             endpoint_tol=1e-20)
        report = run_verify(a, "two", tight)
        endpoint = next(c for c in report.checks if c.name == "endpoint")
        assert not endpoint.passed and not report.passed
        assert endpoint.witness is not None
        x = np.asarray(endpoint.witness["x"])
        y = np.asarray(endpoint.witness["y"])
        assert np.allclose(np.linalg.norm(x), 1.0) and np.allclose(np.linalg.norm(y), 1.0)


def test_standard_suite_contents():
    suite = standard_suite(4, (2, 3))
    keys = {(a.sphere_dim, a.fixed_sphere_dim, a.p) for a in suite}
    assert (3, 1, 2) in keys and (3, 1, 3) in keys
    assert (4, 1, 3) not in keys  # odd codimension with odd p
    assert all(k < n for n, k, _ in keys)
    with_trivial = standard_suite(4, (2,), include_trivial=True)
    assert any(a.fixed_sphere_dim == a.sphere_dim for a in with_trivial)
