"""
Envy-freeness relaxations (EF, EF1, EFX, EFX3, X-Y-Z) and Pareto optimality.

Every checker returns a :class:`FairnessReport` that lists *all* violating
ordered pairs, so a report can be replayed and compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fairdiv.model import (
    Allocation,
    Instance,
    InvalidAllocationError,
    PreconditionError,
    bundle_utility,
    detect_utility_class,
    require_valid,
)

# witness codes
ENVY = "envy"
EF1_ENVY = "envy-after-any-single-removal"
EFX_OWN_BAD = "envy-after-removing-own-bad"
EFX_OTHER_GOOD = "envy-after-removing-others-good"

LAYER_ALL = "all"
LAYER_PLUS = "mixed-goods"
LAYER_MINUS = "pure-bads"


@dataclass(frozen=True)
class Witness:
    envier: int
    envied: int
    item: int | None
    code: str
    layer: str = LAYER_ALL

    def __str__(self):
        text = f"agent {self.envier + 1} -> agent {self.envied + 1}: {self.code}"
        if self.item is not None:
            text += f" (item {self.item + 1})"
        if self.layer != LAYER_ALL:
            text += f" [{self.layer}]"
        return text


@dataclass
class FairnessReport:
    property: str
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def __bool__(self):
        return self.holds

    def __str__(self):
        if self.holds:
            return f"{self.property}: holds"
        return f"{self.property}: fails\n" + "\n".join(f"  {w}" for w in self.witnesses)


def _valuations(inst: Instance, alloc: Allocation):
    """``V[a][b] = u_a(A_b)`` for all ordered pairs."""
    return [[bundle_utility(inst, a, alloc[b]) for b in inst.agents] for a in inst.agents]


def check_ef(inst: Instance, alloc: Allocation) -> FairnessReport:
    require_valid(inst, alloc)
    V = _valuations(inst, alloc)
    report = FairnessReport("EF")
    for a in inst.agents:
        for b in inst.agents:
            if a != b and V[a][a] < V[a][b]:
                report.witnesses.append(Witness(a, b, None, ENVY))
    return report


def check_ef1(inst: Instance, alloc: Allocation) -> FairnessReport:
    """EF1 for mixed manna: envy must vanish after deleting one item from ``A_a`` or ``A_b``."""
    require_valid(inst, alloc)
    V = _valuations(inst, alloc)
    report = FairnessReport("EF1")
    for a in inst.agents:
        row = inst.u[a]
        own = V[a][a]
        for b in inst.agents:
            if a == b or own >= V[a][b]:
                continue
            # removing o from A_a changes the left side, from A_b the right side
            fixed = any(own - row[o] >= V[a][b] for o in alloc[a]) or any(
                own >= V[a][b] - row[o] for o in alloc[b]
            )
            if not fixed:
                report.witnesses.append(Witness(a, b, None, EF1_ENVY))
    return report


def check_efx(inst: Instance, alloc: Allocation) -> FairnessReport:
    require_valid(inst, alloc)
    V = _valuations(inst, alloc)
    report = FairnessReport("EFX")
    for a in inst.agents:
        row = inst.u[a]
        own = V[a][a]
        for b in inst.agents:
            if a == b:
                continue
            for o in sorted(alloc[a]):
                if row[o] < 0 and own - row[o] < V[a][b]:
                    report.witnesses.append(Witness(a, b, o, EFX_OWN_BAD))
            for o in sorted(alloc[b]):
                if row[o] > 0 and own < V[a][b] - row[o]:
                    report.witnesses.append(Witness(a, b, o, EFX_OTHER_GOOD))
    return report


CHECKERS = {"EF": check_ef, "EF1": check_ef1, "EFX": check_efx}


def check_xyz(inst: Instance, alloc: Allocation, x: str, y: str, z: str) -> FairnessReport:
    """X on all items, Y on the mixed goods ``A+`` and Z on the pure bads ``A-``.

    Utilities are always read from the full matrix; only bundle membership is
    restricted for the two sub-layers.
    """
    names = [p.upper() for p in (x, y, z)]
    for p in names:
        if p not in CHECKERS:
            raise ValueError(f"unknown fairness component {p!r}; expected one of {sorted(CHECKERS)}")
    if alloc.scope != frozenset(inst.items):
        raise InvalidAllocationError([f"X-Y-Z fairness needs an allocation of all {inst.m} items"])
    require_valid(inst, alloc)
    layers = [
        (LAYER_ALL, alloc, names[0]),
        (LAYER_PLUS, alloc.restrict(inst.mixed_goods), names[1]),
        (LAYER_MINUS, alloc.restrict(inst.pure_bads), names[2]),
    ]
    report = FairnessReport("-".join(names))
    for layer, sub, name in layers:
        for w in CHECKERS[name](inst, sub).witnesses:
            report.witnesses.append(Witness(w.envier, w.envied, w.item, w.code, layer))
    return report


def check_efx3(inst: Instance, alloc: Allocation) -> FairnessReport:
    report = check_xyz(inst, alloc, "EFX", "EFX", "EFX")
    report.property = "EFX3"
    return report


def get_checker(name: str):
    """Checker for ``ef``, ``ef1``, ``efx``, ``efx3`` or ``xyz:X:Y:Z`` (case-insensitive)."""
    key = name.strip().lower()
    simple = {"ef": check_ef, "ef1": check_ef1, "efx": check_efx, "efx3": check_efx3}
    if key in simple:
        return simple[key]
    if key.startswith("xyz:"):
        parts = key.split(":")[1:]
        if len(parts) != 3 or any(p.upper() not in CHECKERS for p in parts):
            raise ValueError(f"malformed X-Y-Z property {name!r}; expected xyz:X:Y:Z with X,Y,Z in EF/EF1/EFX")
        x, y, z = parts
        return lambda inst, alloc: check_xyz(inst, alloc, x, y, z)
    raise ValueError(f"unknown fairness property {name!r}")


PO_STRATEGIES = ("identical-fast", "tertiary-fast", "exhaustive")


def check_po(inst: Instance, alloc: Allocation, strategy: str = "exhaustive") -> bool:
    """Pareto optimality of ``alloc`` among all allocations of its scope to ``[n]``.

    ``identical-fast`` and ``tertiary-fast`` are exact for their utility
    classes. With identical utilities every complete allocation has the same
    utilitarian sum. With tertiary utilities an item held by an agent who does
    not value it maximally can always be handed to one who does without
    hurting anybody, so PO is equivalent to the maximal utilitarian sum.
    """
    require_valid(inst, alloc)
    if strategy == "identical-fast":
        uclass = detect_utility_class(inst)
        if not uclass.is_identical:
            raise PreconditionError(f"identical-fast PO needs identical utilities, detected {uclass}")
        return True
    if strategy == "tertiary-fast":
        uclass = detect_utility_class(inst)
        if not uclass.is_tertiary:
            raise PreconditionError(f"tertiary-fast PO needs tertiary utilities, detected {uclass}")
        return sum(alloc.utilities(inst)) == max_utilitarian_sum(inst, alloc.scope)
    if strategy == "exhaustive":
        from fairdiv.oracle import pareto_optimal_exhaustive

        return pareto_optimal_exhaustive(inst, alloc).holds
    raise ValueError(f"unknown PO strategy {strategy!r}; expected one of {PO_STRATEGIES}")


def max_utilitarian_sum(inst: Instance, items) -> int:
    # for tertiary instances this is (m+ - m-) * alpha over the full item set
    return sum(max(row[o] for row in inst.u) for o in items)


def envy_bound_violations(inst: Instance, alloc: Allocation, bound: int) -> list[tuple[int, int]]:
    """Ordered pairs ``(a, b)`` with ``u_a(A_a) < u_a(A_b) - bound``."""
    V = _valuations(inst, alloc)
    return [(a, b) for a in inst.agents for b in inst.agents if V[a][a] < V[a][b] - bound]

