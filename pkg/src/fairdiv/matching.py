"""
Agent sets used by the tertiary algorithms.

``largest_positive_set`` is the agent side of a maximum matching between
agents and the mixed goods they value positively (Hopcroft-Karp).
``largest_feasible_bad_set`` picks who receives pure bads, nested with that
set, and ``max_min_priority_order`` orders those receivers.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from fairdiv.model import Allocation, Instance, bundle_utility

_INF = float("inf")


def hopcroft_karp(adjacency: list[list[int]], n_right: int) -> dict[int, int]:
    """Maximum matching of a bipartite graph given as left-vertex adjacency lists.

    Left vertices are scanned in index order and neighbours in list order,
    so the result is deterministic. Returns ``{left: right}``.
    """
    n_left = len(adjacency)
    match_left = [-1] * n_left
    match_right = [-1] * n_right
    dist = [0.0] * n_left

    def bfs():
        queue = deque()
        for v in range(n_left):
            if match_left[v] == -1:
                dist[v] = 0
                queue.append(v)
            else:
                dist[v] = _INF
        found = False
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                mate = match_right[w]
                if mate == -1:
                    found = True
                elif dist[mate] == _INF:
                    dist[mate] = dist[v] + 1
                    queue.append(mate)
        return found

    def dfs(v):
        for w in adjacency[v]:
            mate = match_right[w]
            if mate == -1 or (dist[mate] == dist[v] + 1 and dfs(mate)):
                match_left[v] = w
                match_right[w] = v
                return True
        dist[v] = _INF
        return False

    while bfs():
        for v in range(n_left):
            if match_left[v] == -1:
                dfs(v)
    return {v: w for v, w in enumerate(match_left) if w != -1}


def positive_matching(inst: Instance) -> dict[int, int]:
    """A maximum matching ``{agent: item}`` on edges ``u_a(o) > 0``, ``o`` a mixed good."""
    adjacency = [[o for o in inst.mixed_goods if inst.u[a][o] > 0] for a in inst.agents]
    return hopcroft_karp(adjacency, inst.m)


def largest_positive_set(inst: Instance) -> tuple[int, ...]:
    return tuple(sorted(positive_matching(inst)))


def largest_feasible_bad_set(
    inst: Instance, positive_set: Iterable[int], alloc: Allocation | None = None
) -> tuple[int, ...]:
    """Bad receivers M with ``|M| = min(m-, n)`` and ``M <= N`` or ``N <= M``.

    When ``m- <= |N|`` the ``m-`` agents of N with the highest utility in
    ``alloc`` are chosen (ties to the lower index). When ``|N| < m- < n`` the
    set N is completed with the lowest-index agents outside it.
    """
    N = sorted(positive_set)
    k = inst.m_minus
    if k == 0:
        return ()
    if k >= inst.n:
        return tuple(inst.agents)
    if k <= len(N):
        if alloc is None:
            alloc = Allocation.empty(inst.n)
        richest = sorted(N, key=lambda a: (-bundle_utility(inst, a, alloc[a]), a))
        return tuple(sorted(richest[:k]))
    others = [a for a in inst.agents if a not in set(N)]
    return tuple(sorted(N + others[: k - len(N)]))


def max_min_priority_order(inst: Instance, receivers: Iterable[int], alloc: Allocation) -> tuple[int, ...]:
    """Receivers by non-increasing utility in ``alloc``, ties by ascending index."""
    return tuple(sorted(receivers, key=lambda a: (-bundle_utility(inst, a, alloc[a]), a)))
