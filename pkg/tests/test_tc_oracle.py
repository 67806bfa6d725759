"""Tests for the theorem-backed TC oracle and the bound propagation engine."""

import math

import pytest

from spheretc.errors import EmptyFixedSet, InconsistentFacts, InvalidQuery
from spheretc.tc_oracle import (
    CITE_CG_CAT,
    CITE_CG_FIXED,
    CITE_LM_LOWER,
    CITE_LM_UPPER,
    CITE_ORBIT_HOMOLOGY,
    INF,
    SphereQuery,
    Status,
    cat_g_sphere,
    propagate_bounds,
    standard_sphere_seeds,
    table_rows,
    tc_equivariant,
    tc_invariant,
    tc_sphere,
    query_value,
    valid_queries,
)


class TestSphereQuery:
    def test_odd_p_parity_realizability(self):
        SphereQuery(n=4, k=2, p=3)
        with pytest.raises(InvalidQuery):
            SphereQuery(n=3, k=0, p=3)

    def test_range_checks(self):
        with pytest.raises(InvalidQuery):
            SphereQuery(n=0, k=0, p=2)
        with pytest.raises(InvalidQuery):
            SphereQuery(n=3, k=4, p=2)

    def test_trivial_and_free_allowed(self):
        SphereQuery(n=4, k=4, p=5)
        SphereQuery(n=3, k=-1, p=3)


class TestTCSphere:
    @pytest.mark.parametrize("n,expected", [(1, 2), (2, 3), (7, 2), (8, 3)])
    def test_values(self, n, expected):
        v = tc_sphere(n)
        assert v.is_exact and v.value == expected

    def test_provenance_present(self):
        assert any("Farber" in c for c in tc_sphere(3).provenance)


class TestCatG:
    def test_always_two_with_fixed_point(self):
        assert cat_g_sphere(SphereQuery(3, 1, 3)).value == 2
        assert cat_g_sphere(SphereQuery(2, 0, 2)).value == 2
        assert cat_g_sphere(SphereQuery(4, 4, 2)).value == 2

    def test_empty_fixed_set_rejected(self):
        with pytest.raises(EmptyFixedSet):
            cat_g_sphere(SphereQuery(4, -1, 2))


class TestTCEquivariant:
    def test_odd_odd_is_two(self):
        v = tc_equivariant(SphereQuery(3, 1, 2))
        assert v.is_exact and v.value == 2

    def test_even_case_is_three(self):
        v = tc_equivariant(SphereQuery(2, 1, 2))
        assert v.is_exact and v.value == 3

    def test_disconnected_fixed_set_infinite(self):
        v = tc_equivariant(SphereQuery(4, 0, 2))
        assert v.status == Status.INFINITE
        assert math.isinf(v.lower)

    def test_trivial_action_reduces_to_sphere(self):
        assert tc_equivariant(SphereQuery(5, 5, 3)).value == 2
        assert tc_equivariant(SphereQuery(6, 6, 3)).value == 3

    def test_free_action_rejected(self):
        with pytest.raises(InvalidQuery):
            tc_equivariant(SphereQuery(3, -1, 2))

    def test_parity_grid(self):
        for q in valid_queries(8, (2, 3, 5)):
            if 0 < q.k < q.n:
                v = tc_equivariant(q)
                expected = 2 if (q.n % 2 == 1 and q.k % 2 == 1) else 3
                assert v.is_exact and v.value == expected


class TestTCInvariant:
    def test_deep_codimension_is_three(self):
        v = tc_invariant(SphereQuery(5, 1, 3))
        assert v.is_exact and v.value == 3

    def test_codim_two_even_sphere_is_three(self):
        v = tc_invariant(SphereQuery(4, 2, 2))
        assert v.is_exact and v.value == 3

    def test_codim_one_odd_sphere_is_three(self):
        v = tc_invariant(SphereQuery(3, 2, 2))
        assert v.is_exact and v.value == 3

    @pytest.mark.parametrize("n,k", [(5, 3), (3, 1)])
    def test_codim_two_odd_sphere_unsettled(self, n, k):
        v = tc_invariant(SphereQuery(n, k, 2))
        assert v.status == Status.UNSETTLED
        assert (v.lower, v.upper) == (2, 3)

    @pytest.mark.parametrize("n,k", [(4, 3), (2, 1)])
    def test_codim_one_even_sphere_unsettled(self, n, k):
        v = tc_invariant(SphereQuery(n, k, 2))
        assert v.status == Status.UNSETTLED
        assert (v.lower, v.upper) == (2, 3)

    def test_disconnected_fixed_set_out_of_scope(self):
        v = tc_invariant(SphereQuery(2, 0, 2))
        assert v.status == Status.INFINITE
        assert any("propagation" in c for c in v.provenance)

    def test_trivial_action_out_of_scope(self):
        even = tc_invariant(SphereQuery(4, 4, 2))
        assert even.is_exact and even.value == 3
        odd = tc_invariant(SphereQuery(5, 5, 2))
        assert (odd.lower, odd.upper) == (2, 3)

    def test_exactness_closure(self):
        # exact everywhere in 0 < k < n except exactly the two open families
        for q in valid_queries(9, (2, 3, 5)):
            if not 0 < q.k < q.n:
                continue
            v = tc_invariant(q)
            open_family = (q.k == q.n - 2 and q.n % 2 == 1) or \
                          (q.k == q.n - 1 and q.n % 2 == 0)
            assert v.is_exact == (not open_family)


class TestPropagation:
    def test_seed_catg_alone_bounds_tcg(self):
        q = SphereQuery(3, 1, 3)
        report = propagate_bounds(q, {"cat_G": 2})
        tcg = report.facts["TC_G"]
        assert (tcg.lower, tcg.upper) == (2, 3)
        assert CITE_CG_CAT in tcg.provenance

    def test_even_fixed_sphere_forces_invariant_three(self):
        q = SphereQuery(4, 2, 2)
        report = propagate_bounds(q, {"cat_G": 2, "TC_fixed": 3})
        tcig = report.facts["TC^G"]
        assert (tcig.lower, tcig.upper) == (3, 3)
        assert CITE_LM_LOWER in tcig.provenance
        assert CITE_LM_UPPER in tcig.provenance

    def test_fixed_tc_three_forces_equivariant_three(self):
        q = SphereQuery(4, 2, 2)
        report = propagate_bounds(q, {"cat_G": 2, "TC_fixed": 3})
        tcg = report.facts["TC_G"]
        assert (tcg.lower, tcg.upper) == (3, 3)
        assert CITE_CG_FIXED in tcg.provenance

    def test_standard_seeds_rederive_classification(self):
        for q in valid_queries(8, (2, 3, 5)):
            if not 0 < q.k < q.n:
                continue
            report = propagate_bounds(q, standard_sphere_seeds(q))
            tcg, tcig = report.facts["TC_G"], report.facts["TC^G"]
            truth_g = tc_equivariant(q)
            truth_ig = tc_invariant(q)
            assert tcg.lower <= truth_g.lower and truth_g.upper <= tcg.upper
            assert tcig.lower <= truth_ig.lower and truth_ig.upper <= tcig.upper
            if not (q.n % 2 == 1 and q.k % 2 == 1):
                # the even cases follow from the inequality rules alone
                assert (tcg.lower, tcg.upper) == (3, 3)
            if q.k < q.n - 2:
                assert (tcig.lower, tcig.upper) == (3, 3)
                assert CITE_ORBIT_HOMOLOGY in report.facts["TC_orbit"].provenance

    def test_steps_never_widen(self):
        q = SphereQuery(4, 2, 2)
        report = propagate_bounds(q, standard_sphere_seeds(q))
        assert report.iterations <= 100
        for step in report.steps:
            if step.bound == "lower":
                assert step.after > step.before
            else:
                assert step.after < step.before

    def test_inconsistent_facts(self):
        q = SphereQuery(2, 1, 2)
        with pytest.raises(InconsistentFacts):
            propagate_bounds(q, {"TC": 3, "TC_G": (1, 2)})

    def test_disconnected_seed_propagates_to_infinity(self):
        q = SphereQuery(4, 0, 2)
        report = propagate_bounds(q, standard_sphere_seeds(q))
        assert math.isinf(report.facts["TC_G"].lower)
        assert math.isinf(report.facts["TC^G"].lower)


class TestTable:
    def test_rows(self):
        rows = {(r["n"], r["k"], r["p"]): r for r in table_rows(6, (2, 3, 5))}
        r312 = rows[(3, 1, 2)]
        assert (r312["TC"], r312["TC_G"], r312["cat_G"]) == ("2", "2", "2")
        # k = n-2 on an odd sphere is one of the two open families
        assert r312["TC^G"] == "2..3"
        r322 = rows[(3, 2, 2)]
        assert r322["TC^G"] == "3"
        r212 = rows[(2, 1, 2)]
        assert (r212["TC"], r212["TC_G"], r212["TC^G"]) == ("3", "3", "2..3")
        r513 = rows[(5, 1, 3)]
        assert r513["TC^G"] == "3"
        r402 = rows[(4, 0, 2)]
        assert (r402["TC_G"], r402["TC^G"]) == ("inf", "inf")

    def test_grid_respects_parity(self):
        for r in table_rows(6, (3, 5)):
            if r["k"] < r["n"]:
                assert (r["n"] - r["k"]) % 2 == 0


def test_query_value_dispatch():
    q = SphereQuery(3, 1, 2)
    assert query_value(q, "TC").value == 2
    assert query_value(q, "TC_G").value == 2
    assert query_value(q, "cat_G").value == 2
    assert query_value(q, "TC^G").status == Status.UNSETTLED
    with pytest.raises(InvalidQuery):
        query_value(q, "bogus")
