"""Shared test helpers. Allocations here are written 1-indexed, like the tables."""

from pathlib import Path

from hypothesis import strategies as st

from fairdiv.io import parse_instance
from fairdiv.model import Allocation, Instance

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "fairdiv" / "fixtures"


def load(name: str) -> Instance:
    return parse_instance(FIXTURES / f"{name}.json")


def A(*bundles, scope=None) -> Allocation:
    return Allocation.of([{o - 1 for o in b} for b in bundles], None if scope is None else {o - 1 for o in scope})


def dominates(inst, b, a) -> bool:
    ub, ua = b.utilities(inst), a.utilities(inst)
    return all(x >= y for x, y in zip(ub, ua)) and ub != ua


@st.composite
def instances(draw, max_n=3, max_m=5, values=st.integers(-6, 6)):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    return Instance([[draw(values) for _ in range(m)] for _ in range(n)], m=m)


@st.composite
def tertiary_instances(draw, max_n=3, max_m=6):
    alpha = draw(st.sampled_from([1, 2, 3]))
    return draw(instances(max_n, max_m, st.sampled_from([-alpha, 0, alpha])))


@st.composite
def identical_instances(draw, max_n=3, max_m=6, bound=20):
    n = draw(st.integers(1, max_n))
    row = draw(st.lists(st.integers(-bound, bound), max_size=max_m))
    return Instance([row] * n, m=len(row))


@st.composite
def instance_and_allocation(draw, strategy=None):
    inst = draw(instances() if strategy is None else strategy)
    owners = [draw(st.integers(0, inst.n - 1)) for _ in inst.items]
    return inst, Allocation.from_assignment(inst.n, list(inst.items), owners)
