import pytest
from hypothesis import given, settings

from fairdiv import oracle
from fairdiv.fairness import (
    EFX_OTHER_GOOD,
    EFX_OWN_BAD,
    check_ef,
    check_ef1,
    check_efx,
    check_efx3,
    check_po,
    check_xyz,
    envy_bound_violations,
    get_checker,
    max_utilitarian_sum,
)
from fairdiv.model import Instance, InvalidAllocationError, PreconditionError, bundle_utility
from helpers import A, instance_and_allocation, instances, load, tertiary_instances


def pairs(report):
    return {(w.envier + 1, w.envied + 1) for w in report.witnesses}


class TestEF:
    def test_single_agent(self):
        assert check_ef(Instance([[-3, 4]]), A({1, 2})).holds

    def test_example2(self):
        rep = check_ef(load("example2"), A({1, 2, 3, 4}, set()))
        assert not rep.holds and pairs(rep) == {(1, 2)}

    def test_example5(self):
        rep = check_ef(load("example5"), A({1, 3}, {2}, set()))
        assert (1, 2) in pairs(rep)

    def test_report_text(self):
        rep = check_ef(load("example2"), A({1, 2, 3, 4}, set()))
        assert str(rep).startswith("EF: fails")
        assert "agent 1 -> agent 2" in str(rep)
        assert not rep


class TestEF1:
    def test_example1(self):
        inst = load("example1")
        rep = check_ef1(inst, A({2, 3}, {1}))
        assert (1, 2) in pairs(rep)
        # the three candidate deletions from the proof all stay below 2
        assert bundle_utility(inst, 0, {2}) == 1
        assert bundle_utility(inst, 0, {1}) == -4
        assert bundle_utility(inst, 0, {1, 2}) == -3
        assert not check_ef1(inst, A({2}, {1, 3})).holds

    def test_example3(self):
        assert (1, 2) in pairs(check_ef1(load("example3"), A({1, 3}, {2})))

    def test_deletion_from_own_bundle(self):
        # agent 1 is only happy once it drops its own bad
        inst = Instance([[0, -3], [0, -3]])
        assert check_ef1(inst, A({2}, {1})).holds
        assert not check_ef(inst, A({2}, {1})).holds
        # removing from the other bundle alone would not have helped
        assert bundle_utility(inst, 0, {1}) < bundle_utility(inst, 0, set())

    def test_ef_implies_ef1(self):
        inst = Instance([[3, 1], [1, 3]])
        assert check_ef(inst, A({1}, {2})).holds and check_ef1(inst, A({1}, {2})).holds


class TestEFX:
    def test_example4(self):
        assert check_efx(load("example4"), A({1, 2, 3, 4}, {5, 6})).holds

    def test_example5_infeasible(self):
        rep = check_efx(load("example5"), A({1}, {2}, {3}))
        assert not rep.holds and {w.envier for w in rep.witnesses} == {2}

    def test_single_agent(self):
        assert check_efx(Instance([[5, -5]]), A({1, 2})).holds

    def test_codes(self):
        inst = Instance([[-1, 2], [-1, 2]])
        rep = check_efx(inst, A({1}, {2}))
        assert {(w.envier, w.item, w.code) for w in rep.witnesses} == {
            (0, 0, EFX_OWN_BAD),
            (0, 1, EFX_OTHER_GOOD),
        }


class TestEFX3:
    def test_example4_unions(self):
        inst = load("example4")
        AC = A({1, 4}, {2, 3, 5, 6})
        assert bundle_utility(inst, 0, {0}) == 7
        assert bundle_utility(inst, 0, {1, 2, 4, 5}) == 8
        assert not check_efx3(inst, AC).holds
        assert not check_efx3(inst, A({1, 5, 6}, {2, 3, 4})).holds

    def test_lemma2(self):
        assert check_efx3(load("lemma2"), A({1, 2, 3}, {4})).holds

    def test_goods_only_equals_efx(self):
        inst = Instance([[3, 1, 2], [1, 2, 2]])
        for alloc in oracle.enumerate_allocations(inst):
            assert check_efx3(inst, alloc).holds == check_efx(inst, alloc).holds

    def test_layers_use_full_rows(self):
        inst = load("example4")
        rep = check_efx3(inst, A({1, 4}, {2, 3, 5, 6}))
        assert rep.property == "EFX3"
        assert {w.layer for w in rep.witnesses} <= {"all", "mixed-goods", "pure-bads"}


class TestXYZ:
    def test_efx_triple_is_efx3(self):
        inst = load("example4")
        for alloc in oracle.enumerate_allocations(inst):
            assert check_xyz(inst, alloc, "EFX", "EFX", "EFX").holds == check_efx3(inst, alloc).holds

    def test_ef1_triple(self):
        inst = load("example4")
        AC = A({1, 4}, {2, 3, 5, 6})
        expected = all(
            check_ef1(inst, AC.restrict(items)).holds for items in (inst.items, inst.mixed_goods, inst.pure_bads)
        )
        assert check_xyz(inst, AC, "EF1", "EF1", "EF1").holds == expected

    def test_single_agent(self):
        assert check_xyz(Instance([[1, -1]]), A({1, 2}), "EF", "EF", "EF").holds

    def test_needs_complete_scope(self):
        with pytest.raises(ValueError):
            check_xyz(load("example1"), A({1}, {2}), "EF", "EF", "EF")

    def test_get_checker(self):
        assert get_checker("EF1") is check_ef1
        assert get_checker("xyz:ef:ef1:efx")(load("lemma2"), A({1, 2, 3}, {4})).holds in (True, False)
        for bad in ("nope", "xyz:ef:ef1", "xyz:ef:ef1:foo"):
            with pytest.raises(ValueError):
                get_checker(bad)


class TestPO:
    def test_example2_identical_fast(self):
        inst = load("example2")
        for alloc in oracle.enumerate_allocations(inst):
            assert check_po(inst, alloc, "identical-fast")

    def test_example1_exhaustive(self):
        inst = load("example1")
        assert not check_po(inst, A({2, 3}, {1}), "exhaustive")
        assert check_po(inst, A({1, 3}, {2}), "exhaustive")

    def test_lemma2(self):
        inst = load("lemma2")
        assert check_po(inst, A({1, 2, 3}, {4}), "exhaustive")
        assert check_po(inst, A({1, 2, 3}, {4}), "tertiary-fast")

    def test_preconditions(self):
        with pytest.raises(PreconditionError, match="general"):
            check_po(load("example1"), A({1, 2, 3}, set()), "identical-fast")
        with pytest.raises(PreconditionError, match="general"):
            check_po(load("example1"), A({1, 2, 3}, set()), "tertiary-fast")
        with pytest.raises(ValueError):
            check_po(load("example2"), A({1, 2, 3, 4}, set()), "magic")

    def test_invalid_allocation(self):
        with pytest.raises(InvalidAllocationError):
            check_po(load("example1"), A({1}, {1, 2, 3}), "exhaustive")

    def test_max_sum(self):
        assert max_utilitarian_sum(load("example1"), range(3)) == 5

    @settings(max_examples=150, deadline=None)
    @given(instance_and_allocation(tertiary_instances(max_n=3, max_m=5)))
    def test_tertiary_fast_matches_exhaustive(self, case):
        # the utilitarian shortcut is exact for tertiary utilities, in both directions
        inst, alloc = case
        assert check_po(inst, alloc, "tertiary-fast") == check_po(inst, alloc, "exhaustive")


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(instance_and_allocation())
    def test_implications(self, case):
        inst, alloc = case
        ef, ef1, efx = check_ef(inst, alloc).holds, check_ef1(inst, alloc).holds, check_efx(inst, alloc).holds
        assert not ef or ef1
        assert not efx or ef1
        assert not check_efx3(inst, alloc).holds or efx

    @settings(max_examples=200, deadline=None)
    @given(instance_and_allocation(tertiary_instances()))
    def test_ef1_is_efx_for_tertiary(self, case):
        inst, alloc = case
        assert check_ef1(inst, alloc).holds == check_efx(inst, alloc).holds

    @settings(max_examples=200, deadline=None)
    @given(instance_and_allocation())
    def test_witnesses_replay(self, case):
        inst, alloc = case
        u = lambda a, S: bundle_utility(inst, a, S)  # noqa: E731
        for w in check_ef(inst, alloc).witnesses:
            assert u(w.envier, alloc[w.envier]) < u(w.envier, alloc[w.envied])
        for w in check_ef1(inst, alloc).witnesses:
            a, b = w.envier, w.envied
            Aa, Ab = alloc[a], alloc[b]
            assert u(a, Aa) < u(a, Ab)
            assert all(u(a, Aa - {o}) < u(a, Ab - {o}) for o in Aa | Ab)
        for w in check_efx(inst, alloc).witnesses:
            a, b, o = w.envier, w.envied, w.item
            if w.code == EFX_OWN_BAD:
                assert o in alloc[a] and inst.u[a][o] < 0
                assert u(a, alloc[a] - {o}) < u(a, alloc[b])
            else:
                assert w.code == EFX_OTHER_GOOD
                assert o in alloc[b] and inst.u[a][o] > 0
                assert u(a, alloc[a]) < u(a, alloc[b] - {o})

    def test_envy_bound(self):
        inst = Instance([[2, 2, 2], [2, 2, 2]])
        assert envy_bound_violations(inst, A({1, 2, 3}, set()), 2) == [(1, 0)]
        assert envy_bound_violations(inst, A({1, 2}, {3}), 2) == []
