"""Exact Nash, disutility-Nash and egalitarian welfare over a chosen agent set."""

from __future__ import annotations

import enum
import math
from typing import Iterable

from fairdiv.model import Allocation, Instance, bundle_utility


class WelfareKind(enum.Enum):
    NW = "nw"
    DNW = "dnw"
    EW = "ew"

    @classmethod
    def parse(cls, name: str) -> WelfareKind:
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown welfare {name!r}; expected nw, dnw or ew") from None


def _agent_utilities(inst: Instance, alloc: Allocation, agents: Iterable[int] | None) -> list[int]:
    agents = list(inst.agents if agents is None else agents)
    if not agents:
        raise ValueError("welfare over an empty agent set is undefined")
    return [bundle_utility(inst, a, alloc[a]) for a in agents]


def nash_welfare(inst: Instance, alloc: Allocation, agents: Iterable[int] | None = None) -> int:
    """Signed product of the bundle utilities of ``agents`` (all agents by default)."""
    return math.prod(_agent_utilities(inst, alloc, agents))


def disutility_nash_welfare(inst: Instance, alloc: Allocation, agents: Iterable[int] | None = None) -> int:
    return math.prod(-x for x in _agent_utilities(inst, alloc, agents))


def egalitarian_welfare(inst: Instance, alloc: Allocation, agents: Iterable[int] | None = None) -> int:
    return min(_agent_utilities(inst, alloc, agents))


def welfare(inst: Instance, alloc: Allocation, kind: WelfareKind, agents: Iterable[int] | None = None) -> int:
    return _WELFARES[kind](inst, alloc, agents)


_WELFARES = {
    WelfareKind.NW: nash_welfare,
    WelfareKind.DNW: disutility_nash_welfare,
    WelfareKind.EW: egalitarian_welfare,
}


def geomean_approx_holds(val: int, opt: int, n: int, ratio_num: int = 1000, ratio_den: int = 1061) -> bool:
    """Whether ``val ** (1/n) >= (ratio_num / ratio_den) * opt ** (1/n)``.

    Decided without roots as ``val * ratio_den**n >= opt * ratio_num**n``.
    """
    if val < 0 or opt < 0:
        raise ValueError("geometric-mean comparison needs non-negative welfare values")
    if n < 1 or ratio_num < 0 or ratio_den <= 0:
        raise ValueError("need n >= 1 and a non-negative ratio with positive denominator")
    return val * ratio_den**n >= opt * ratio_num**n
