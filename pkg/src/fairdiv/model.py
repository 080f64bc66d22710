"""
Instances, item classes, allocations and bundle utilities for mixed manna.

Agents and items are 0-indexed here. File formats and human-facing reports
use 1-indexed ids (see :mod:`fairdiv.io`).

All utilities are Python ints, so sums and welfare products are exact and
never overflow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class PreconditionError(ValueError):
    """An operation was called on an instance outside its utility class."""


class InvalidAllocationError(ValueError):
    """An allocation violates disjointness, completeness or index ranges."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ItemKind(enum.Enum):
    MIXED_GOOD = "mixed-good"
    PURE_BAD = "pure-bad"
    DUMMY_BAD = "dummy-bad"


@dataclass(frozen=True)
class ItemClass:
    kind: ItemKind
    is_good: bool = False
    is_pure_good: bool = False


class UtilityKind(enum.Enum):
    GENERAL = "general"
    IDENTICAL = "identical"
    TERTIARY = "tertiary"
    IDENTICAL_TERTIARY = "identical-tertiary"


@dataclass(frozen=True)
class UtilityClass:
    kind: UtilityKind
    alpha: int | None = None

    @property
    def is_identical(self) -> bool:
        return self.kind in (UtilityKind.IDENTICAL, UtilityKind.IDENTICAL_TERTIARY)

    @property
    def is_tertiary(self) -> bool:
        return self.kind in (UtilityKind.TERTIARY, UtilityKind.IDENTICAL_TERTIARY)

    def __str__(self):
        if self.is_tertiary:
            return f"{self.kind.value}(alpha={self.alpha})"
        return self.kind.value


@dataclass(frozen=True)
class Instance:
    """An ``n x m`` integer utility matrix; ``u[a][o]`` is agent a's utility for item o."""

    u: tuple[tuple[int, ...], ...]

    def __init__(self, utilities: Sequence[Sequence[int]], m: int | None = None):
        rows = tuple(tuple(row) for row in utilities)
        if len(rows) < 1:
            raise ValueError("an instance needs at least one agent")
        width = len(rows[0]) if m is None else m
        for a, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(
                    f"ragged utility matrix: agent {a + 1} has {len(row)} items, expected {width}"
                )
            for o, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, int):
                    raise TypeError(
                        f"utility of agent {a + 1} for item {o + 1} is not an integer: {x!r}"
                    )
        object.__setattr__(self, "u", rows)

    @property
    def n(self) -> int:
        return len(self.u)

    @property
    def m(self) -> int:
        return len(self.u[0])

    @property
    def agents(self) -> range:
        return range(self.n)

    @property
    def items(self) -> range:
        return range(self.m)

    @cached_property
    def item_classes(self) -> tuple[ItemClass, ...]:
        return tuple(_classify(self.u, o) for o in self.items)

    @cached_property
    def mixed_goods(self) -> tuple[int, ...]:
        return self._of_kind(ItemKind.MIXED_GOOD)

    @cached_property
    def pure_bads(self) -> tuple[int, ...]:
        return self._of_kind(ItemKind.PURE_BAD)

    @cached_property
    def dummy_bads(self) -> tuple[int, ...]:
        return self._of_kind(ItemKind.DUMMY_BAD)

    @property
    def m_plus(self) -> int:
        return len(self.mixed_goods)

    @property
    def m_minus(self) -> int:
        return len(self.pure_bads)

    @property
    def m_zero(self) -> int:
        return len(self.dummy_bads)

    def _of_kind(self, kind):
        return tuple(o for o, c in enumerate(self.item_classes) if c.kind is kind)

    def negated(self) -> Instance:
        return Instance([[-x for x in row] for row in self.u], m=self.m)


def _classify(u, o) -> ItemClass:
    column = [row[o] for row in u]
    if any(x > 0 for x in column):
        return ItemClass(
            ItemKind.MIXED_GOOD,
            is_good=all(x >= 0 for x in column),
            is_pure_good=all(x > 0 for x in column),
        )
    if all(x < 0 for x in column):
        return ItemClass(ItemKind.PURE_BAD)
    return ItemClass(ItemKind.DUMMY_BAD)


def classify_items(inst: Instance) -> tuple[ItemClass, ...]:
    return inst.item_classes


def bundle_utility(inst: Instance, a: int, bundle: Iterable[int]) -> int:
    """Exact additive utility of agent ``a`` for ``bundle``; the empty bundle is worth 0."""
    if not 0 <= a < inst.n:
        raise IndexError(f"agent index {a} out of range for n={inst.n}")
    row = inst.u[a]
    total = 0
    for o in bundle:
        if not 0 <= o < inst.m:
            raise IndexError(f"item index {o} out of range for m={inst.m}")
        total += row[o]
    return total


def detect_utility_class(inst: Instance) -> UtilityClass:
    identical = all(row == inst.u[0] for row in inst.u)
    alpha = max((abs(x) for row in inst.u for x in row), default=0)
    # all-zero (or empty) matrices count as tertiary with alpha = 1
    if alpha == 0:
        alpha = 1
    tertiary = all(x in (-alpha, 0, alpha) for row in inst.u for x in row)
    if identical and tertiary:
        return UtilityClass(UtilityKind.IDENTICAL_TERTIARY, alpha)
    if tertiary:
        return UtilityClass(UtilityKind.TERTIARY, alpha)
    if identical:
        return UtilityClass(UtilityKind.IDENTICAL)
    return UtilityClass(UtilityKind.GENERAL)


@dataclass(frozen=True)
class Allocation:
    """Bundles ``A_1..A_n`` of item indices together with the item set they cover.

    Construction does not validate against an instance; use
    :func:`validate_allocation` (the checkers do so themselves).
    """

    bundles: tuple[frozenset[int], ...]
    scope: frozenset[int]

    @classmethod
    def of(cls, bundles: Iterable[Iterable[int]], scope: Iterable[int] | None = None) -> Allocation:
        bundles = tuple(frozenset(b) for b in bundles)
        if scope is None:
            scope = frozenset().union(*bundles)
        return cls(bundles, frozenset(scope))

    @classmethod
    def empty(cls, n: int, scope: Iterable[int] = ()) -> Allocation:
        return cls(tuple(frozenset() for _ in range(n)), frozenset(scope))

    @classmethod
    def from_assignment(cls, n: int, items: Sequence[int], owners: Sequence[int]) -> Allocation:
        """Build from parallel sequences: ``items[i]`` goes to agent ``owners[i]``."""
        bundles = [set() for _ in range(n)]
        for o, a in zip(items, owners):
            bundles[a].add(o)
        return cls(tuple(frozenset(b) for b in bundles), frozenset(items))

    @property
    def n(self) -> int:
        return len(self.bundles)

    def __getitem__(self, a: int) -> frozenset[int]:
        return self.bundles[a]

    def owner(self, o: int) -> int | None:
        for a, bundle in enumerate(self.bundles):
            if o in bundle:
                return a
        return None

    def restrict(self, items: Iterable[int]) -> Allocation:
        """The sub-allocation on ``items`` (e.g. ``A+`` for the mixed goods)."""
        keep = frozenset(items)
        return Allocation(tuple(b & keep for b in self.bundles), self.scope & keep)

    def give(self, a: int, o: int) -> Allocation:
        """A copy with item ``o`` added to agent ``a``'s bundle and to the scope."""
        bundles = list(self.bundles)
        bundles[a] = bundles[a] | {o}
        return Allocation(tuple(bundles), self.scope | {o})

    def utilities(self, inst: Instance) -> tuple[int, ...]:
        return tuple(bundle_utility(inst, a, b) for a, b in enumerate(self.bundles))

    def as_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.bundles]

    def __str__(self):
        inner = ", ".join("{" + ",".join(str(o + 1) for o in sorted(b)) + "}" for b in self.bundles)
        return f"({inner})"


def validate_allocation(inst: Instance, alloc: Allocation) -> list[str]:
    """Return the list of invariant violations; an empty list means the allocation is valid."""
    violations = []
    if alloc.n != inst.n:
        violations.append(f"allocation has {alloc.n} bundles but instance has {inst.n} agents")
    seen = {}
    for a, bundle in enumerate(alloc.bundles):
        for o in sorted(bundle):
            if not 0 <= o < inst.m:
                violations.append(f"agent {a + 1} holds item {o + 1} outside 1..{inst.m}")
            if o in seen:
                violations.append(f"item {o + 1} is in the bundles of agents {seen[o] + 1} and {a + 1}")
            else:
                seen[o] = a
    for o in sorted(alloc.scope):
        if not 0 <= o < inst.m:
            violations.append(f"scope item {o + 1} outside 1..{inst.m}")
    for o in sorted(alloc.scope - seen.keys()):
        violations.append(f"item {o + 1} is unallocated")
    for o in sorted(seen.keys() - alloc.scope):
        violations.append(f"item {o + 1} is allocated but outside the scope")
    return violations


def require_valid(inst: Instance, alloc: Allocation) -> None:
    violations = validate_allocation(inst, alloc)
    if violations:
        raise InvalidAllocationError(violations)
