"""
Greedy allocation algorithms for mixed manna.

* :func:`nash_max_tertiary` - EFX and PO with tertiary utilities, maximises
  the egalitarian welfare.
* :func:`nash_max_min_tertiary` - EFX3 and PO with tertiary utilities.
* :func:`max_min_identical` - EFX and PO with identical utilities.

All ties are broken towards the lowest agent or item index, so every run is
deterministic. Each algorithm returns the allocation together with an
:class:`AlgorithmTrace` that replays to exactly that allocation.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from fairdiv.matching import largest_feasible_bad_set, largest_positive_set, max_min_priority_order
from fairdiv.model import (
    Allocation,
    Instance,
    ItemKind,
    PreconditionError,
    detect_utility_class,
)

log = logging.getLogger(__name__)

PHASE_GOODS = "mixed-goods"
PHASE_BADS = "pure-bads"
PHASE_DUMMIES = "dummy-bads"

_PHASE_OF_KIND = {
    ItemKind.MIXED_GOOD: PHASE_GOODS,
    ItemKind.PURE_BAD: PHASE_BADS,
    ItemKind.DUMMY_BAD: PHASE_DUMMIES,
}


@dataclass(frozen=True)
class TraceEvent:
    item: int
    agent: int
    phase: str
    utilities: tuple[int, ...]  # every agent's utility right after the assignment


@dataclass
class AlgorithmTrace:
    algorithm: str
    n: int
    events: list[TraceEvent] = field(default_factory=list)
    positive_agents: tuple[int, ...] = ()
    bad_receivers: tuple[int, ...] = ()
    priority_order: tuple[int, ...] = ()
    transfers: int = 0  # improving-path transfers made inside alg_binary

    def record(self, inst: Instance, alloc: Allocation, item: int, agent: int, phase: str) -> None:
        self.events.append(TraceEvent(item, agent, phase, alloc.utilities(inst)))

    def replay(self) -> Allocation:
        alloc = Allocation.empty(self.n)
        for event in self.events:
            alloc = alloc.give(event.agent, event.item)
        return alloc

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "positive_agents": [a + 1 for a in self.positive_agents],
            "bad_receivers": [a + 1 for a in self.bad_receivers],
            "priority_order": [a + 1 for a in self.priority_order],
            "transfers": self.transfers,
            "events": [
                {"item": e.item + 1, "agent": e.agent + 1, "phase": e.phase, "utilities": list(e.utilities)}
                for e in self.events
            ],
        }


def _require_tertiary(inst: Instance) -> int:
    uclass = detect_utility_class(inst)
    if not uclass.is_tertiary:
        raise PreconditionError(f"algorithm needs tertiary utilities, detected {uclass}")
    return uclass.alpha


def binary_view(inst: Instance) -> Instance:
    """The instance :func:`alg_binary` actually optimises: negative utilities for
    mixed goods become zero, everything else is unchanged."""
    goods = set(inst.mixed_goods)
    return Instance([[max(x, 0) if o in goods else x for o, x in enumerate(row)] for row in inst.u], m=inst.m)


def alg_binary(inst: Instance, agents: Iterable[int], initial: Allocation | None = None) -> Allocation:
    """Nash-welfare-maximal allocation of the mixed goods to ``agents``.

    Negative utilities for mixed goods are treated as zero, which leaves
    binary ``{0, alpha}`` valuations. Starting from ``initial`` (by default
    every mixed good with the first agent), each good is moved to the
    lowest-index agent of ``agents`` who values it at alpha unless its holder
    already does. Then, while some agent ``a`` reaches agent ``b`` in the
    exchange graph (edge ``x -> y`` iff ``x`` holds a good ``y`` values) with
    ``u_a >= u_b + 2 * alpha``, one good is shifted along each edge of a
    shortest such path.
    """
    return _alg_binary(inst, agents, initial)[0]


def _alg_binary(inst, agents, initial=None):
    _require_tertiary(inst)
    goods = inst.mixed_goods
    if not goods:
        return Allocation.empty(inst.n), 0
    N = sorted(set(agents))
    members = set(N)
    likes = {a: {o for o in goods if inst.u[a][o] > 0} for a in N}

    if initial is None:
        initial = Allocation.of([goods] + [()] * (inst.n - 1))
    holder = {}
    for o in goods:
        h = initial.owner(o)
        if h is None or h not in members or o not in likes[h]:
            candidates = [a for a in N if o in likes[a]]
            if not candidates:
                raise ValueError(f"no agent of the given set values mixed good {o + 1} positively")
            h = candidates[0]
        holder[o] = h

    bundles = {a: set() for a in N}
    for o, h in holder.items():
        bundles[h].add(o)
    # utilities in units of alpha: every good now sits with an agent valuing it at alpha
    count = {a: len(bundles[a]) for a in N}

    transfers = 0
    while True:
        path = _improving_path(N, bundles, likes, count)
        if path is None:
            break
        for x, y, o in path:
            bundles[x].remove(o)
            bundles[y].add(o)
        count[path[0][0]] -= 1
        count[path[-1][1]] += 1
        transfers += 1

    alloc = Allocation.of([bundles.get(a, ()) for a in inst.agents], goods)
    log.debug("alg_binary: %d transfers, utilities %s", transfers, alloc.utilities(inst))
    return alloc, transfers


def _improving_path(N, bundles, likes, count):
    """Shortest exchange path from a richest possible source to a poorest target
    that is at least two goods poorer, as a list of ``(from, to, item)`` moves."""
    for source in sorted(N, key=lambda a: (-count[a], a)):
        parent = {source: None}
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in N:
                if y in parent:
                    continue
                shared = bundles[x] & likes[y]
                if shared:
                    parent[y] = (x, min(shared))
                    dist[y] = dist[x] + 1
                    queue.append(y)
        targets = [b for b in parent if b != source and count[source] >= count[b] + 2]
        if not targets:
            continue
        target = min(targets, key=lambda b: (count[b], dist[b], b))
        moves = []
        y = target
        while parent[y] is not None:
            x, o = parent[y]
            moves.append((x, y, o))
            y = x
        return moves[::-1]
    return None


def round_robin_bads(
    inst: Instance, order: Sequence[int], bads: Iterable[int], alloc: Allocation
) -> Allocation:
    """Deal ``bads`` (ascending index) to ``order[0], order[1], ...`` cyclically."""
    bads = sorted(bads)
    if bads and not order:
        raise ValueError("cannot deal pure bads to an empty priority order")
    for i, o in enumerate(bads):
        alloc = alloc.give(order[i % len(order)], o)
    return alloc


def _goods_phase(inst: Instance, trace: AlgorithmTrace) -> Allocation:
    alloc = Allocation.empty(inst.n)
    if not inst.mixed_goods:
        return alloc
    N = largest_positive_set(inst)
    trace.positive_agents = N
    goods_alloc, trace.transfers = _alg_binary(inst, N)
    for o in inst.mixed_goods:
        a = goods_alloc.owner(o)
        alloc = alloc.give(a, o)
        trace.record(inst, alloc, o, a, PHASE_GOODS)
    return alloc


def _dummies_phase(inst: Instance, alloc: Allocation, trace: AlgorithmTrace) -> Allocation:
    for o in inst.dummy_bads:
        a = next(b for b in inst.agents if inst.u[b][o] == 0)
        alloc = alloc.give(a, o)
        trace.record(inst, alloc, o, a, PHASE_DUMMIES)
    return alloc


def nash_max_tertiary(inst: Instance) -> tuple[Allocation, AlgorithmTrace]:
    """EFX, PO and egalitarian-maximal allocation for tertiary utilities.

    Mixed goods via :func:`alg_binary`, then each pure bad to a currently
    richest agent, then each dummy bad to an agent indifferent to it.
    """
    _require_tertiary(inst)
    trace = AlgorithmTrace("nash-max-tertiary", inst.n)
    alloc = _goods_phase(inst, trace)
    utils = list(alloc.utilities(inst))
    for o in inst.pure_bads:
        a = max(inst.agents, key=lambda b: (utils[b], -b))
        alloc = alloc.give(a, o)
        utils[a] += inst.u[a][o]
        trace.record(inst, alloc, o, a, PHASE_BADS)
    alloc = _dummies_phase(inst, alloc, trace)
    return alloc, trace


def nash_max_min_tertiary(
    inst: Instance, bad_receivers: Iterable[int] | None = None
) -> tuple[Allocation, AlgorithmTrace]:
    """EFX3 and PO allocation for tertiary utilities.

    Pure bads are dealt round-robin to a feasible receiver set in max-min
    priority order. ``bad_receivers`` overrides that set; it exists to
    reproduce what goes wrong when the feasibility constraint is ignored.
    """
    _require_tertiary(inst)
    trace = AlgorithmTrace("nash-max-min-tertiary", inst.n)
    alloc = _goods_phase(inst, trace)
    if inst.pure_bads:
        if bad_receivers is None:
            M = largest_feasible_bad_set(inst, trace.positive_agents, alloc)
        else:
            M = tuple(sorted(bad_receivers))
        order = max_min_priority_order(inst, M, alloc)
        trace.bad_receivers, trace.priority_order = M, order
        dealt = round_robin_bads(inst, order, inst.pure_bads, alloc)
        for o in inst.pure_bads:
            a = dealt.owner(o)
            alloc = alloc.give(a, o)
            trace.record(inst, alloc, o, a, PHASE_BADS)
    alloc = _dummies_phase(inst, alloc, trace)
    return alloc, trace


def max_min_identical(inst: Instance) -> tuple[Allocation, AlgorithmTrace]:
    """EFX and PO allocation for identical utilities in O(m log m + m n).

    Items go in order of non-increasing absolute utility: a bad to a richest
    agent, a good or dummy to a poorest one.
    """
    uclass = detect_utility_class(inst)
    if not uclass.is_identical:
        raise PreconditionError(f"max-min-identical needs identical utilities, detected {uclass}")
    u = inst.u[0]
    trace = AlgorithmTrace("max-min-identical", inst.n)
    alloc = Allocation.empty(inst.n)
    utils = [0] * inst.n
    for o in sorted(inst.items, key=lambda o: (-abs(u[o]), o)):
        if u[o] < 0:
            a = max(inst.agents, key=lambda b: (utils[b], -b))
        else:
            a = min(inst.agents, key=lambda b: (utils[b], b))
        alloc = alloc.give(a, o)
        utils[a] += u[o]
        trace.record(inst, alloc, o, a, _PHASE_OF_KIND[inst.item_classes[o].kind])
    return alloc, trace


ALGORITHMS = {
    "nash-max-tertiary": nash_max_tertiary,
    "nash-max-min-tertiary": nash_max_min_tertiary,
    "max-min-identical": max_min_identical,
}

