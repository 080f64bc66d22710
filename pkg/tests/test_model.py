import pytest
from hypothesis import given

from fairdiv.model import (
    Allocation,
    Instance,
    InvalidAllocationError,
    ItemKind,
    UtilityKind,
    bundle_utility,
    classify_items,
    detect_utility_class,
    require_valid,
    validate_allocation,
)
from helpers import A, identical_instances, instance_and_allocation, instances, load


class TestInstance:
    def test_shape(self):
        inst = load("example1")
        assert (inst.n, inst.m) == (2, 3)
        assert inst.u == ((2, -4, 1), (-4, 2, 1))

    def test_no_items(self):
        inst = Instance([[], []])
        assert (inst.n, inst.m) == (2, 0)
        assert inst.mixed_goods == inst.pure_bads == inst.dummy_bads == ()

    def test_ragged(self):
        with pytest.raises(ValueError, match="ragged"):
            Instance([[1, 2], [3]])

    def test_non_integer(self):
        with pytest.raises(TypeError):
            Instance([[1, 2.5]])
        with pytest.raises(TypeError):
            Instance([[True, 1]])

    def test_needs_an_agent(self):
        with pytest.raises(ValueError):
            Instance([])

    def test_big_integers_stay_exact(self):
        big = 10**40
        inst = Instance([[big, big + 1]])
        assert bundle_utility(inst, 0, {0, 1}) == 2 * big + 1

    def test_negated(self):
        assert load("example3").negated().u == ((2, 1, 4), (1, 2, 4))


class TestClassify:
    def test_example1(self):
        classes = classify_items(load("example1"))
        assert [c.kind for c in classes] == [ItemKind.MIXED_GOOD] * 3
        assert [c.is_pure_good for c in classes] == [False, False, True]
        assert [c.is_good for c in classes] == [False, False, True]

    def test_empty(self):
        assert classify_items(Instance([[]])) == ()

    def test_dummies(self):
        inst = Instance([[0, -1], [-1, 0]])
        assert [c.kind for c in classify_items(inst)] == [ItemKind.DUMMY_BAD] * 2

    def test_counts(self):
        inst = load("lemma2")
        assert (inst.m_plus, inst.m_minus, inst.m_zero) == (2, 2, 0)
        assert inst.mixed_goods == (0, 1) and inst.pure_bads == (2, 3)

    @given(instances())
    def test_partition(self, inst):
        groups = [inst.mixed_goods, inst.pure_bads, inst.dummy_bads]
        assert sorted(o for g in groups for o in g) == list(inst.items)
        for o, c in enumerate(inst.item_classes):
            column = [row[o] for row in inst.u]
            if c.is_pure_good:
                assert c.is_good
            if c.is_good:
                assert c.kind is ItemKind.MIXED_GOOD
            assert (c.kind is ItemKind.MIXED_GOOD) == any(x > 0 for x in column)
            assert (c.kind is ItemKind.PURE_BAD) == all(x < 0 for x in column)


class TestBundleUtility:
    def test_values(self):
        assert bundle_utility(load("example1"), 0, {1, 2}) == -3
        assert bundle_utility(load("example4"), 0, {0, 1, 2, 3}) == -82
        assert bundle_utility(load("example4"), 1, set()) == 0

    def test_bad_indices(self):
        inst = load("example1")
        with pytest.raises(IndexError):
            bundle_utility(inst, 2, set())
        with pytest.raises(IndexError):
            bundle_utility(inst, 0, {3})

    @given(instance_and_allocation())
    def test_additive(self, case):
        inst, alloc = case
        for a in inst.agents:
            left, right = alloc[0], frozenset(inst.items) - alloc[0]
            assert bundle_utility(inst, a, inst.items) == bundle_utility(inst, a, left) + bundle_utility(inst, a, right)

    @given(identical_instances())
    def test_identical_agent_independent(self, inst):
        values = {bundle_utility(inst, a, inst.items) for a in inst.agents}
        assert len(values) == 1


class TestDetect:
    def test_examples(self):
        c = detect_utility_class(load("example2"))
        assert (c.kind, c.alpha) == (UtilityKind.IDENTICAL_TERTIARY, 1)
        assert detect_utility_class(load("example1")).kind is UtilityKind.GENERAL
        assert detect_utility_class(load("example4")).kind is UtilityKind.IDENTICAL
        c = detect_utility_class(load("example5"))
        assert (c.kind, c.alpha) == (UtilityKind.IDENTICAL_TERTIARY, 1)
        c = detect_utility_class(load("lemma2"))
        assert (c.kind, c.alpha) == (UtilityKind.TERTIARY, 1)

    def test_single_agent_is_identical(self):
        # one row is vacuously identical; a lone nonzero value is also tertiary
        c = detect_utility_class(Instance([[5]]))
        assert c.is_identical and c.is_tertiary and c.alpha == 5

    def test_all_zero_and_empty(self):
        for inst in (Instance([[0, 0], [0, 0]]), Instance([[], []])):
            c = detect_utility_class(inst)
            assert c.is_tertiary and c.alpha == 1

    def test_alpha_is_max_abs(self):
        c = detect_utility_class(Instance([[2, 0, -2], [0, -2, 2]]))
        assert (c.kind, c.alpha) == (UtilityKind.TERTIARY, 2)
        assert detect_utility_class(Instance([[2, 1], [0, 2]])).kind is UtilityKind.GENERAL


class TestAllocation:
    def test_valid(self):
        assert validate_allocation(load("example1"), A({2, 3}, {1})) == []

    def test_overlap(self):
        inst = Instance([[1], [1]])
        out = validate_allocation(inst, A({1}, {1}))
        assert any("two bundles" in v or "bundles of agents" in v for v in out)

    def test_unallocated(self):
        inst = Instance([[1, 1], [1, 1]])
        out = validate_allocation(inst, A({1}, set(), scope={1, 2}))
        assert out == ["item 2 is unallocated"]

    def test_wrong_shape(self):
        inst = Instance([[1, 1], [1, 1]])
        assert validate_allocation(inst, A({1, 2})) != []
        assert validate_allocation(inst, A({1, 5}, set())) != []

    def test_require_valid(self):
        with pytest.raises(InvalidAllocationError) as err:
            require_valid(Instance([[1], [1]]), A({1}, {1}))
        assert err.value.violations

    def test_helpers(self):
        alloc = A({2, 3}, {1})
        assert str(alloc) == "({2,3}, {1})"
        assert alloc.owner(0) == 1 and alloc.owner(1) == 0
        assert alloc.restrict({0, 1}) == A({2}, {1})
        assert alloc.give(1, 3).bundles[1] == {0, 3}
        assert alloc.as_lists() == [[1, 2], [0]]
        assert Allocation.empty(2).bundles == (frozenset(), frozenset())
        assert Allocation.from_assignment(2, [0, 1, 2], [1, 0, 0]) == alloc
        assert alloc.utilities(load("example1")) == (-3, -4)
