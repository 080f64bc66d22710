import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from fairdiv.algorithms import alg_binary
from fairdiv.matching import (
    hopcroft_karp,
    largest_feasible_bad_set,
    largest_positive_set,
    max_min_priority_order,
    positive_matching,
)
from fairdiv.model import Allocation, Instance
from helpers import A, instances, load


def brute_force_matching_size(adjacency, n_right):
    """Largest k such that some k left vertices have distinct neighbours."""
    n_left = len(adjacency)
    for k in range(min(n_left, n_right), 0, -1):
        for lefts in itertools.combinations(range(n_left), k):
            for rights in itertools.product(*(adjacency[v] for v in lefts)):
                if len(set(rights)) == k:
                    return k
    return 0


class TestHopcroftKarp:
    def test_small(self):
        match = hopcroft_karp([[0, 1], [0], [1]], 2)
        assert len(match) == 2
        assert len(set(match.values())) == 2

    def test_empty(self):
        assert hopcroft_karp([[], []], 3) == {}
        assert hopcroft_karp([], 0) == {}

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 6).flatmap(lambda r: st.lists(st.lists(st.integers(0, r - 1), unique=True), max_size=6).map(
        lambda adj: (adj, r))))
    def test_maximum(self, case):
        adjacency, n_right = case
        match = hopcroft_karp(adjacency, n_right)
        assert all(w in adjacency[v] for v, w in match.items())
        assert len(set(match.values())) == len(match)
        assert len(match) == brute_force_matching_size(adjacency, n_right)

    def test_deterministic(self):
        adj = [[0, 1, 2], [0, 1], [0]]
        assert hopcroft_karp(adj, 3) == hopcroft_karp(adj, 3)


class TestPositiveSet:
    def test_examples(self):
        assert largest_positive_set(load("example1")) == (0, 1)
        assert largest_positive_set(load("lemma2")) == (0,)
        N = largest_positive_set(load("example5"))
        assert len(N) == 2 and set(N) <= {0, 1, 2}

    def test_no_goods(self):
        assert largest_positive_set(load("example2")) == ()

    @settings(max_examples=150, deadline=None)
    @given(instances(max_n=5, max_m=6))
    def test_brute_force_size(self, inst):
        adjacency = [[o for o in inst.mixed_goods if inst.u[a][o] > 0] for a in inst.agents]
        N = largest_positive_set(inst)
        assert len(N) == brute_force_matching_size(adjacency, inst.m)
        for a, o in positive_matching(inst).items():
            assert inst.u[a][o] > 0
        # every mixed good is liked by someone in N, else the matching could grow
        for o in inst.mixed_goods:
            assert any(inst.u[a][o] > 0 for a in N)


class TestFeasibleBadSet:
    def test_example5(self):
        inst = load("example5")
        N = largest_positive_set(inst)
        goods = alg_binary(inst, N)
        M = largest_feasible_bad_set(inst, N, goods)
        assert len(M) == 1 and set(M) <= set(N) and 2 not in M

    def test_lemma2(self):
        assert largest_feasible_bad_set(load("lemma2"), (0,)) == (0, 1)

    def test_no_bads(self):
        assert largest_feasible_bad_set(load("example1"), (0, 1)) == ()

    def test_richest_chosen(self):
        inst = Instance([[1, 0, -1], [0, 1, -1], [1, 1, -1]])
        alloc = A(set(), {1, 2}, set(), scope={1, 2})
        assert largest_feasible_bad_set(inst, (0, 1), alloc) == (1,)

    def test_padding(self):
        # |N| = 1 < m- = 2 < n = 3: N plus the lowest-index outsider
        inst = Instance([[0, -1, -1], [1, -1, -1], [0, -1, -1]])
        assert largest_feasible_bad_set(inst, (1,)) == (0, 1)

    @settings(max_examples=150, deadline=None)
    @given(instances(max_n=4, max_m=6, values=st.sampled_from([-1, 0, 1])))
    def test_nesting(self, inst):
        N = largest_positive_set(inst)
        M = largest_feasible_bad_set(inst, N, Allocation.empty(inst.n))
        assert len(M) == min(inst.m_minus, inst.n)
        assert set(M) <= set(N) or set(N) <= set(M)


class TestPriorityOrder:
    def test_lemma2(self):
        inst = load("lemma2")
        assert max_min_priority_order(inst, (0, 1), A({1, 2}, set(), scope={1, 2})) == (0, 1)

    def test_ties_and_singletons(self):
        inst = Instance([[1, 1], [1, 1], [1, 1]])
        empty = Allocation.empty(3)
        assert max_min_priority_order(inst, (2, 0, 1), empty) == (0, 1, 2)
        assert max_min_priority_order(inst, (1,), empty) == (1,)

    def test_richest_first(self):
        inst = Instance([[1, 1], [1, 1]])
        assert max_min_priority_order(inst, (0, 1), A(set(), {1, 2})) == (1, 0)
