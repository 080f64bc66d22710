"""
Exhaustive ground truth on small instances.

Allocations of items ``O`` to agents ``N`` are enumerated in lexicographic
assignment order: the assignment ``(owner of O[0], owner of O[1], ...)``
counts up like a base-``|N|`` number, so index 0 gives everything to the
first agent. Welfare optimisation and Pareto dominance work on blocks of
that index range with numpy. Named fairness properties are evaluated by a
vectorised twin of the scalar checkers in :mod:`fairdiv.fairness`; arbitrary
checker callables are replayed allocation by allocation.

Every comparison is exact. Utility tables use int64 only when the largest
possible magnitude fits; otherwise they fall back to Python ints.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from fairdiv.fairness import FairnessReport, get_checker
from fairdiv.model import Allocation, Instance, InvalidAllocationError, require_valid
from fairdiv.welfare import WelfareKind, welfare

DEFAULT_CAP = 2_000_000
OPTIMIZER_CAP = 64
BLOCK = 1 << 15
_INT64_SAFE = 1 << 62


class CapExceededError(RuntimeError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} allocations exceed the enumeration cap of {cap}")


@dataclass
class OracleResult:
    objective: WelfareKind
    agents: tuple[int, ...]
    items: tuple[int, ...]
    optimum: int | None
    optimizers: list[Allocation] = field(default_factory=list)
    count: int = 0  # total number of optimizers (the list is capped)
    maximize: bool = True
    scanned: int = 0


@dataclass
class ParetoResult:
    holds: bool
    dominator: Allocation | None = None
    scanned: int = 0

    def __bool__(self):
        return self.holds


@dataclass
class FindResult:
    allocation: Allocation | None
    scanned: int

    @property
    def found(self) -> bool:
        return self.allocation is not None


@dataclass
class RatioResult:
    """Worst welfare among fair allocations against the unconstrained optimum.

    ``worst`` is None when no allocation passes the checker. The ratio is
    meant geometrically: ``(worst / optimum) ** (1 / n)``.
    """

    worst: int | None
    optimum: int
    n: int
    fair_count: int
    worst_allocation: Allocation | None = None

    @property
    def exists(self) -> bool:
        return self.worst is not None


def _space(inst, agents, items):
    agents = tuple(sorted(inst.agents if agents is None else set(agents)))
    items = tuple(sorted(inst.items if items is None else set(items)))
    return agents, items


def allocation_count(n_agents: int, n_items: int) -> int:
    return n_agents**n_items


def _check_cap(agents, items, cap):
    total = allocation_count(len(agents), len(items))
    if cap is not None and total > cap:
        raise CapExceededError(total, cap)
    return total


def enumerate_allocations(
    inst: Instance,
    agents: Iterable[int] | None = None,
    items: Iterable[int] | None = None,
    cap: int | None = DEFAULT_CAP,
) -> Iterator[Allocation]:
    """Yield every complete allocation of ``items`` to ``agents`` exactly once."""
    agents, items = _space(inst, agents, items)
    _check_cap(agents, items, cap)
    for owners in itertools.product(agents, repeat=len(items)):
        yield Allocation.from_assignment(inst.n, items, owners)


def allocation_at(inst: Instance, agents: Sequence[int], items: Sequence[int], index: int) -> Allocation:
    """The allocation with the given position in enumeration order."""
    k = len(agents)
    owners = []
    for _ in items:
        index, digit = divmod(index, k)
        owners.append(agents[digit])
    return Allocation.from_assignment(inst.n, items, owners[::-1])


def _owner_positions(k: int, size: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    pos = np.empty((stop - start, size), dtype=np.int64)
    for j in range(size - 1, -1, -1):
        idx, pos[:, j] = np.divmod(idx, k)
    return pos


def _blocks(inst, agents, items, cap, block=None):
    """Yield ``(start, owner_positions, utilities)`` over the enumeration.

    ``utilities[r, a]`` is agent a's bundle utility in allocation ``start + r``
    (zero for agents outside ``agents``).
    """
    total = _check_cap(agents, items, cap)
    if not agents:
        return
    block = block or BLOCK
    bound = max((abs(inst.u[a][o]) for a in inst.agents for o in items), default=0) * max(len(items), 1)
    dtype = np.int64 if bound < _INT64_SAFE else object
    values = np.array([[inst.u[a][o] for o in items] for a in agents], dtype=dtype).reshape(len(agents), len(items))
    k = len(agents)
    for start in range(0, total, block):
        stop = min(start + block, total)
        pos = _owner_positions(k, len(items), start, stop)
        U = np.zeros((stop - start, inst.n), dtype=dtype)
        for p, a in enumerate(agents):
            U[:, a] = ((pos == p).astype(dtype) * values[p]).sum(axis=1) if items else 0
        yield start, pos, U


def _welfare_vector(U, agents, kind):
    cols = U[:, list(agents)]
    if kind is WelfareKind.EW:
        return cols.min(axis=1)
    if kind is WelfareKind.DNW:
        cols = -cols
    bound = int(np.abs(cols).max(initial=0))
    if cols.dtype != object and bound > 0 and len(agents) * math.log2(bound) >= 62:
        cols = cols.astype(object)
    return cols.prod(axis=1)


def _optimize(inst, agents, items, kind, maximize, cap, each_nonempty=False):
    agents, items = _space(inst, agents, items)
    if not agents:
        raise ValueError("welfare over an empty agent set is undefined")
    best = None
    count = 0
    indices = []
    scanned = 0
    for start, pos, U in _blocks(inst, agents, items, cap):
        W = _welfare_vector(U, agents, kind)
        rows = np.arange(len(W))
        if each_nonempty:
            keep = np.ones(len(W), dtype=bool)
            for p in range(len(agents)):
                keep &= (pos == p).any(axis=1)
            W, rows = W[keep], rows[keep]
        scanned += len(pos)
        if len(W) == 0:
            continue
        local = W.max() if maximize else W.min()
        better = best is None or (local > best if maximize else local < best)
        if better:
            best, count, indices = local, 0, []
        if better or local == best:
            hits = rows[W == local]
            count += len(hits)
            room = OPTIMIZER_CAP - len(indices)
            indices.extend(int(start + r) for r in hits[:room])
    optimizers = [allocation_at(inst, agents, items, i) for i in indices]
    return OracleResult(
        kind,
        agents,
        items,
        None if best is None else int(best),
        optimizers,
        count,
        maximize,
        scanned,
    )


def max_welfare(
    inst: Instance,
    agents: Iterable[int] | None,
    items: Iterable[int] | None,
    kind: WelfareKind,
    cap: int | None = DEFAULT_CAP,
) -> OracleResult:
    """Exact maximum of ``kind`` over all allocations of ``items`` to ``agents``."""
    return _optimize(inst, agents, items, kind, True, cap)


def min_welfare(
    inst: Instance,
    agents: Iterable[int] | None,
    items: Iterable[int] | None,
    kind: WelfareKind,
    cap: int | None = DEFAULT_CAP,
    each_nonempty: bool = False,
) -> OracleResult:
    """Exact minimum; ``each_nonempty`` restricts to allocations giving every agent an item."""
    return _optimize(inst, agents, items, kind, False, cap, each_nonempty)


def pareto_optimal_exhaustive(inst: Instance, alloc: Allocation, cap: int | None = DEFAULT_CAP) -> ParetoResult:
    """Search all allocations of ``alloc.scope`` to every agent for a Pareto improvement.

    The dominator returned is the first one in enumeration order.
    """
    require_valid(inst, alloc)
    agents, items = _space(inst, None, alloc.scope)
    base = np.array(alloc.utilities(inst), dtype=object)
    scanned = 0
    for start, _, U in _blocks(inst, agents, items, cap):
        ref = base.astype(U.dtype)
        better = (U >= ref).all(axis=1) & (U > ref).any(axis=1)
        scanned += len(U)
        hits = np.flatnonzero(better)
        if len(hits):
            return ParetoResult(False, allocation_at(inst, agents, items, int(start + hits[0])), scanned)
    return ParetoResult(True, None, scanned)


_SENTINEL = 1 << 61


def _layer_stats(inst, agents, items, pos, layer):
    """Per-allocation envy statistics restricted to the item positions in ``layer``.

    Returns ``V`` with ``V[r, a, b] = u_a(A_b)`` and four removal bounds used
    by EF1 and EFX, all as int64 arrays with sentinels for empty minima/maxima.
    """
    R, n = len(pos), inst.n
    owners = np.asarray(agents, dtype=np.int64)[pos] if len(items) else np.zeros((R, 0), dtype=np.int64)
    V = np.zeros((R, n, n), dtype=np.int64)
    own_bad_max = np.full((R, n), -_SENTINEL, dtype=np.int64)  # max over own items of -u_a(o)
    own_bad_min = np.full((R, n), _SENTINEL, dtype=np.int64)  # min over own bads of -u_a(o)
    other_max = np.full((R, n, n), -_SENTINEL, dtype=np.int64)  # max over o in A_b of u_a(o)
    other_good_min = np.full((R, n, n), _SENTINEL, dtype=np.int64)  # min over goods (for a) in A_b
    rows = np.arange(R)
    for j in layer:
        o = items[j]
        col = np.array([inst.u[a][o] for a in inst.agents], dtype=np.int64)
        b = owners[:, j]
        onehot = np.zeros((R, n), dtype=bool)
        onehot[rows, b] = True
        V += onehot[:, None, :] * col[None, :, None]
        cur = other_max[rows, :, b]
        other_max[rows, :, b] = np.maximum(cur, col[None, :])
        good = np.where(col > 0, col, _SENTINEL)
        cur = other_good_min[rows, :, b]
        other_good_min[rows, :, b] = np.minimum(cur, good[None, :])
        # the holder b's own view of item o
        mine = -col[b]
        own_bad_max[rows, b] = np.maximum(own_bad_max[rows, b], mine)
        own_bad_min[rows, b] = np.where(mine > 0, np.minimum(own_bad_min[rows, b], mine), own_bad_min[rows, b])
    return V, own_bad_max, own_bad_min, other_max, other_good_min


def _component_mask(name, stats):
    V, own_bad_max, own_bad_min, other_max, other_good_min = stats
    own = np.einsum("raa->ra", V)
    gap = V - own[:, :, None]  # envy of a towards b; positive means envy
    if name == "EF":
        ok = gap <= 0
    elif name == "EF1":
        ok = (gap <= 0) | (own_bad_max[:, :, None] >= gap) | (other_max >= gap)
    elif name == "EFX":
        ok = (own_bad_min[:, :, None] >= gap) & (other_good_min >= gap)
    else:
        raise ValueError(f"unknown fairness component {name!r}")
    return ok.all(axis=(1, 2))


def _parse_prop(name: str):
    key = name.strip().lower()
    if key in ("ef", "ef1", "efx"):
        return (key.upper(),)
    if key == "efx3":
        return ("EFX", "EFX", "EFX")
    if key.startswith("xyz:"):
        parts = tuple(p.upper() for p in key.split(":")[1:])
        if len(parts) == 3 and all(p in ("EF", "EF1", "EFX") for p in parts):
            return parts
    raise ValueError(f"unknown fairness property {name!r}")


def _vectorizable(inst, items):
    bound = max((abs(inst.u[a][o]) for a in inst.agents for o in items), default=0)
    return bound * (len(items) + 1) < _SENTINEL // 4


def fairness_masks(
    inst: Instance,
    prop: str,
    agents: Iterable[int] | None = None,
    items: Iterable[int] | None = None,
    cap: int | None = DEFAULT_CAP,
) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Vectorised checker: yield ``(start, owner_positions, holds)`` per block.

    Agrees with the scalar checkers of :mod:`fairdiv.fairness` on every
    allocation (cross-checked in the test suite).
    """
    agents, items = _space(inst, agents, items)
    components = _parse_prop(prop)
    if not _vectorizable(inst, items):
        raise ValueError("utilities too large for the vectorised checker")
    if len(components) == 3 and items != tuple(inst.items):
        raise InvalidAllocationError([f"X-Y-Z fairness needs an allocation of all {inst.m} items"])
    plus, minus = set(inst.mixed_goods), set(inst.pure_bads)
    layers = [
        list(range(len(items))),
        [j for j, o in enumerate(items) if o in plus],
        [j for j, o in enumerate(items) if o in minus],
    ]
    for start, pos, U in _blocks(inst, agents, items, cap):
        holds = np.ones(len(pos), dtype=bool)
        for name, layer in zip(components, layers):
            holds &= _component_mask(name, _layer_stats(inst, agents, items, pos, layer))
        yield start, pos, holds


def _resolve(prop) -> Callable[[Instance, Allocation], FairnessReport]:
    return prop if callable(prop) else get_checker(prop)


def _use_masks(inst, prop, items):
    return isinstance(prop, str) and _vectorizable(inst, items)


def find_fair(
    inst: Instance,
    prop,
    agents: Iterable[int] | None = None,
    items: Iterable[int] | None = None,
    cap: int | None = DEFAULT_CAP,
) -> FindResult:
    """First allocation (in enumeration order) passing ``prop``, or a certified none.

    ``prop`` is a property name (see :func:`fairdiv.fairness.get_checker`) or
    any ``(inst, alloc) -> FairnessReport`` callable.
    """
    agents, items = _space(inst, agents, items)
    if _use_masks(inst, prop, items):
        scanned = 0
        for start, pos, holds in fairness_masks(inst, prop, agents, items, cap):
            hits = np.flatnonzero(holds)
            if len(hits):
                return FindResult(allocation_at(inst, agents, items, start + int(hits[0])), start + int(hits[0]) + 1)
            scanned += len(pos)
        return FindResult(None, scanned)
    checker = _resolve(prop)
    scanned = 0
    for alloc in enumerate_allocations(inst, agents, items, cap):
        scanned += 1
        if checker(inst, alloc).holds:
            return FindResult(alloc, scanned)
    return FindResult(None, scanned)


def fair_allocations(
    inst: Instance,
    prop,
    agents: Iterable[int] | None = None,
    items: Iterable[int] | None = None,
    cap: int | None = DEFAULT_CAP,
) -> Iterator[Allocation]:
    """Every allocation passing ``prop``, in enumeration order."""
    agents, items = _space(inst, agents, items)
    if _use_masks(inst, prop, items):
        for start, _, holds in fairness_masks(inst, prop, agents, items, cap):
            for r in np.flatnonzero(holds):
                yield allocation_at(inst, agents, items, start + int(r))
        return
    checker = _resolve(prop)
    for alloc in enumerate_allocations(inst, agents, items, cap):
        if checker(inst, alloc).holds:
            yield alloc


def leximin(
    inst: Instance,
    agents: Iterable[int] | None = None,
    items: Iterable[int] | None = None,
    cap: int | None = DEFAULT_CAP,
) -> Allocation:
    """Allocation whose ascending utility vector over ``agents`` is lexicographically largest.

    Ties go to the earliest allocation in enumeration order.
    """
    agents, items = _space(inst, agents, items)
    if not agents:
        raise ValueError("leximin over an empty agent set is undefined")
    best_vec, best_index = None, None
    for start, _, U in _blocks(inst, agents, items, cap):
        S = np.sort(U[:, list(agents)], axis=1)
        rows = np.arange(len(S))
        for col in range(S.shape[1]):
            column = S[rows, col]
            rows = rows[column == column.max()]
        vec = tuple(int(x) for x in S[rows[0]])
        if best_vec is None or vec > best_vec:
            best_vec, best_index = vec, start + int(rows[0])
    return allocation_at(inst, agents, items, best_index)


def worst_case_ratio(
    inst: Instance,
    prop,
    kind: WelfareKind,
    agents: Iterable[int] | None = None,
    items: Iterable[int] | None = None,
    cap: int | None = DEFAULT_CAP,
) -> RatioResult:
    """Smallest ``kind`` welfare over allocations passing ``prop`` versus the optimum."""
    agents, items = _space(inst, agents, items)
    optimum = max_welfare(inst, agents, items, kind, cap).optimum
    if not _use_masks(inst, prop, items):
        worst, worst_alloc, fair_count = None, None, 0
        for alloc in fair_allocations(inst, prop, agents, items, cap):
            fair_count += 1
            value = welfare(inst, alloc, kind, agents)
            if worst is None or value < worst:
                worst, worst_alloc = value, alloc
        return RatioResult(worst, optimum, len(agents), fair_count, worst_alloc)
    worst, worst_index, fair_count = None, None, 0
    blocks = _blocks(inst, agents, items, cap)
    for (start, _, holds), (_, _, U) in zip(fairness_masks(inst, prop, agents, items, cap), blocks):
        fair_count += int(holds.sum())
        if not holds.any():
            continue
        W = _welfare_vector(U, agents, kind)
        rows = np.flatnonzero(holds)
        r = rows[np.argmin(W[rows])]
        if worst is None or W[r] < worst:
            worst, worst_index = int(W[r]), start + int(r)
    worst_alloc = None if worst_index is None else allocation_at(inst, agents, items, worst_index)
    return RatioResult(worst, optimum, len(agents), fair_count, worst_alloc)
