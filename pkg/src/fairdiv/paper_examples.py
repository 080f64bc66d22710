"""
Regression driver over the bundled example fixtures.

Each :class:`Claim` recomputes one published value or verdict from the
fixture files and compares it exactly. ``run_claims`` is what the
``fairdiv paper-examples`` command executes.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from fairdiv import algorithms, fairness, matching, oracle
from fairdiv.io import FormatError, parse_allocation, parse_instance
from fairdiv.generators import DEFAULT_SEED, pure_goods_suite
from fairdiv.model import (
    Allocation,
    ItemKind,
    UtilityKind,
    bundle_utility,
    detect_utility_class,
    validate_allocation,
)
from fairdiv.welfare import (
    WelfareKind,
    disutility_nash_welfare,
    egalitarian_welfare,
    geomean_approx_holds,
    nash_welfare,
)


class MissingFixtureError(FormatError):
    pass


def default_fixture_dir() -> Path:
    return Path(str(resources.files("fairdiv") / "fixtures"))


class Fixtures:
    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else default_fixture_dir()
        self._cache = {}

    def _path(self, name):
        path = self.directory / f"{name}.json"
        if not path.is_file():
            raise MissingFixtureError(f"fixture {path} not found")
        return path

    def instance(self, name):
        if name not in self._cache:
            self._cache[name] = parse_instance(self._path(name))
        return self._cache[name]

    def allocation(self, name, instance_name):
        return parse_allocation(self._path(name), self.instance(instance_name))


@dataclass(frozen=True)
class Claim:
    id: str
    text: str
    check: Callable[[Fixtures], bool]


@dataclass(frozen=True)
class ClaimResult:
    id: str
    text: str
    passed: bool
    detail: str = ""


def _alloc(*bundles, scope=None):
    """Allocation from 1-indexed bundles."""
    return Allocation.of([{o - 1 for o in b} for b in bundles], None if scope is None else {o - 1 for o in scope})


def _dominates(inst, b, a):
    ub, ua = b.utilities(inst), a.utilities(inst)
    return all(x >= y for x, y in zip(ub, ua)) and any(x > y for x, y in zip(ub, ua))


def _ex1_classes(fx):
    classes = fx.instance("example1").item_classes
    return all(c.kind is ItemKind.MIXED_GOOD for c in classes) and [c.is_pure_good for c in classes] == [
        False,
        False,
        True,
    ]


def _ex1_mnw(fx):
    inst = fx.instance("example1")
    res = oracle.max_welfare(inst, [0, 1], inst.mixed_goods, WelfareKind.NW)
    return res.optimum == 12 and {_alloc({2, 3}, {1}), _alloc({2}, {1, 3})} <= set(res.optimizers)


def _ex1_not_ef1(fx):
    inst = fx.instance("example1")
    A, B = fx.allocation("example1_A", "example1"), fx.allocation("example1_B", "example1")
    a_rep, b_rep = fairness.check_ef1(inst, A), fairness.check_ef1(inst, B)
    return (
        not a_rep.holds
        and any((w.envier, w.envied) == (0, 1) for w in a_rep.witnesses)
        and any((w.envier, w.envied) == (1, 0) for w in b_rep.witnesses)
    )


def _ex1_witness_values(fx):
    inst = fx.instance("example1")
    return (
        bundle_utility(inst, 0, {2}) == 1
        and bundle_utility(inst, 0, {1}) == -4
        and bundle_utility(inst, 0, {1, 2}) == -3
        and bundle_utility(inst, 0, {0}) == 2
        and bundle_utility(inst, 0, set()) == 0
    )


def _ex1_not_po(fx):
    inst = fx.instance("example1")
    A, B = fx.allocation("example1_A", "example1"), fx.allocation("example1_B", "example1")
    swap_a, swap_b = _alloc({1, 3}, {2}), _alloc({1}, {2, 3})
    return (
        not oracle.pareto_optimal_exhaustive(inst, A).holds
        and not oracle.pareto_optimal_exhaustive(inst, B).holds
        and _dominates(inst, swap_a, A)
        and _dominates(inst, swap_b, B)
    )


def _classes(fx):
    ex1 = detect_utility_class(fx.instance("example1"))
    ex2 = detect_utility_class(fx.instance("example2"))
    return ex1.kind is UtilityKind.GENERAL and ex2.kind is UtilityKind.IDENTICAL_TERTIARY and ex2.alpha == 1


def _ex1_valid(fx):
    inst = fx.instance("example1")
    return validate_allocation(inst, fx.allocation("example1_A", "example1")) == []


def _ex5_witness(fx):
    inst = fx.instance("example5")
    A, _ = algorithms.nash_max_min_tertiary(inst, bad_receivers=[2])
    return any(w.envier == 2 for w in fairness.check_ef1(inst, A).witnesses)


def _lemma2_binary(fx):
    inst = fx.instance("lemma2")
    A = algorithms.alg_binary(inst, [0])
    return A.restrict(inst.mixed_goods) == _alloc({1, 2}, set(), scope={1, 2}) and A.utilities(inst)[0] == 2


def _lemma2_round_robin(fx):
    inst = fx.instance("lemma2")
    A = algorithms.round_robin_bads(inst, [0, 1], inst.pure_bads, Allocation.empty(2))
    return A.owner(2) == 0 and A.owner(3) == 1


def _leximin_pure_goods(fx):
    # no fixture: a fixed seeded sample of identical pure-goods instances
    for inst in pure_goods_suite(20, DEFAULT_SEED):
        if not fairness.check_efx(inst, oracle.leximin(inst)).holds:
            return False
    return True


def _ex2_po(fx):
    inst = fx.instance("example2")
    return detect_utility_class(inst).kind is UtilityKind.IDENTICAL_TERTIARY and all(
        fairness.check_po(inst, A, "identical-fast") and oracle.pareto_optimal_exhaustive(inst, A).holds
        for A in oracle.enumerate_allocations(inst)
    )


def _ex2_min_unconstrained(fx):
    inst = fx.instance("example2")
    res = oracle.min_welfare(inst, None, None, WelfareKind.DNW)
    return (
        res.optimum == 0
        and res.count == 2
        and all(any(not b for b in A.bundles) and not fairness.check_ef1(inst, A).holds for A in res.optimizers)
    )


def _ex2_min_constrained(fx):
    inst = fx.instance("example2")
    res = oracle.min_welfare(inst, None, None, WelfareKind.DNW, each_nonempty=True)
    return (
        res.optimum == 3
        and res.count == len(res.optimizers) == 8
        and all(sorted(map(len, A.bundles)) == [1, 3] for A in res.optimizers)
        and all(not fairness.check_ef1(inst, A).holds for A in res.optimizers)
    )


def _ex3_mdnw(fx):
    inst = fx.instance("example3")
    res = oracle.max_welfare(inst, None, None, WelfareKind.DNW)
    A, B = fx.allocation("example3_A", "example3"), _alloc({1}, {2, 3})
    return res.optimum == 12 and {A, B} <= set(res.optimizers) and disutility_nash_welfare(inst, A) == 12


def _ex3_not_ef1_not_po(fx):
    inst = fx.instance("example3")
    A, B = fx.allocation("example3_A", "example3"), _alloc({1}, {2, 3})
    return (
        bundle_utility(inst, 0, {2}) == -4
        and bundle_utility(inst, 0, {0}) == -2
        and bundle_utility(inst, 0, {1}) == -1
        and not fairness.check_ef1(inst, A).holds
        and not fairness.check_ef1(inst, B).holds
        and not oracle.pareto_optimal_exhaustive(inst, A).holds
        and not oracle.pareto_optimal_exhaustive(inst, B).holds
        and _dominates(inst, _alloc({2, 3}, {1}), A)
        and _dominates(inst, _alloc({2}, {1, 3}), B)
    )


def _ex4_efx(fx):
    inst = fx.instance("example4")
    return fairness.check_efx(inst, fx.allocation("example4_efx", "example4")).holds


def _ex4_no_efx3(fx):
    inst = fx.instance("example4")
    res = oracle.find_fair(inst, "efx3")
    return not res.found and res.scanned == 64


def _ex4_unions(fx):
    inst = fx.instance("example4")
    AC, AD = _alloc({1, 4}, {2, 3, 5, 6}), _alloc({1, 5, 6}, {2, 3, 4})
    return (
        bundle_utility(inst, 0, {0}) == 7
        and bundle_utility(inst, 1, {1, 2, 4, 5}) == 8
        and bundle_utility(inst, 1, {1, 2, 3}) == -89
        and bundle_utility(inst, 0, {4, 5}) == -3
        and not fairness.check_efx3(inst, AC).holds
        and not fairness.check_efx3(inst, AD).holds
    )


def _ex5_sets(fx):
    inst = fx.instance("example5")
    N = matching.largest_positive_set(inst)
    return len(N) == 2 and set(N) <= {0, 1, 2} and N == (0, 1)


def _ex5_infeasible(fx):
    inst = fx.instance("example5")
    A, _ = algorithms.nash_max_min_tertiary(inst, bad_receivers=[2])
    return A in {_alloc({1}, {2}, {3}), _alloc({2}, {1}, {3})} and not fairness.check_ef1(inst, A).holds


def _ex5_feasible(fx):
    inst = fx.instance("example5")
    A, trace = algorithms.nash_max_min_tertiary(inst)
    return 2 not in trace.bad_receivers and fairness.check_efx3(inst, A).holds


def _lemma2_alg2(fx):
    inst = fx.instance("lemma2")
    A, _ = algorithms.nash_max_min_tertiary(inst)
    return (
        A == _alloc({1, 2, 3}, {4})
        and egalitarian_welfare(inst, A) == -1
        and fairness.check_efx3(inst, A).holds
        and oracle.pareto_optimal_exhaustive(inst, A).holds
    )


def _lemma2_mew(fx):
    inst = fx.instance("lemma2")
    res = oracle.max_welfare(inst, None, None, WelfareKind.EW)
    return res.optimum == 0 and _alloc({1, 2, 3, 4}, set()) in res.optimizers


def _lemma2_no_efx3_mew(fx):
    inst = fx.instance("lemma2")
    res = oracle.max_welfare(inst, None, None, WelfareKind.EW)
    return res.count == len(res.optimizers) and not any(fairness.check_efx3(inst, A).holds for A in res.optimizers)


def _ex6(m):
    def check(fx):
        inst = fx.instance(f"example6_m{m}")
        A = _alloc({1, 2}, set(range(3, m + 3)))
        B = _alloc({1, *range(3, m // 2 + 3)}, {2, *range(m // 2 + 3, m + 3)})
        ratio = oracle.worst_case_ratio(inst, "efx", WelfareKind.DNW)
        mdnw = oracle.max_welfare(inst, None, None, WelfareKind.DNW)
        out, _ = algorithms.max_min_identical(inst)
        split = sorted(sorted(inst.u[0][o] for o in bundle) for bundle in out.bundles)
        return (
            split == [[-m] + [-1] * (m // 2)] * 2
            and disutility_nash_welfare(inst, A) == 2 * m * m
            and 4 * disutility_nash_welfare(inst, B) == 9 * m * m
            and fairness.check_efx(inst, A).holds
            and fairness.check_efx(inst, B).holds
            and (ratio.worst, ratio.optimum, ratio.n) == (2 * m * m, 9 * m * m // 4, 2)
            and out in mdnw.optimizers
            and disutility_nash_welfare(inst, out) == mdnw.optimum
        )

    return check


def _ex6_bound(fx):
    inst = fx.instance("example6_m4")
    ratio = oracle.worst_case_ratio(inst, "efx", WelfareKind.DNW)
    return geomean_approx_holds(ratio.worst, ratio.optimum, 2, 1000, 1061) and not geomean_approx_holds(
        ratio.worst, ratio.optimum, 2, 1000, 1060
    )


def _ex6_nw_b(fx):
    inst = fx.instance("example6_m4")
    B, _ = algorithms.max_min_identical(inst)
    return nash_welfare(inst, B) == 36 and disutility_nash_welfare(inst, B) == 36


CLAIMS = [
    Claim("ex1-classes", "example1: items 1-3 are mixed goods, item 3 a pure good", _ex1_classes),
    Claim("ex1-largest-set", "example1: largest positive set is [2]",
          lambda fx: matching.largest_positive_set(fx.instance("example1")) == (0, 1)),
    Claim("classes", "example1 is general; example2 is identical-tertiary with alpha 1", _classes),
    Claim("ex1-valid", "example1: A = ({2,3},{1}) is a valid allocation", _ex1_valid),
    Claim("ex1-mnw", "example1: max NW over mixed goods is 12, attained by A and B", _ex1_mnw),
    Claim("ex1-nw-value", "example1: NW(A) = 12",
          lambda fx: nash_welfare(fx.instance("example1"), fx.allocation("example1_A", "example1")) == 12),
    Claim("ex1-witness-values", "example1: u1 values behind the EF1 failure", _ex1_witness_values),
    Claim("ex1-not-ef1", "example1: A and B are not EF1", _ex1_not_ef1),
    Claim("ex1-not-po", "example1: A and B are dominated by swapping items 1 and 2", _ex1_not_po),
    Claim("ex2-po", "example2: every allocation is PO", _ex2_po),
    Claim("ex2-min-dnw", "example2: min dNW leaves an agent without bads and is not EF1", _ex2_min_unconstrained),
    Claim("ex2-min-dnw-nonempty", "example2: min dNW with one bad each is a 1/3 split, not EF1",
          _ex2_min_constrained),
    Claim("ex3-mdnw", "example3: max dNW is 12, attained by A and B", _ex3_mdnw),
    Claim("ex3-not-ef1-po", "example3: A and B are neither EF1 nor PO", _ex3_not_ef1_not_po),
    Claim("ex4-efx", "example4: ({1,2,3,4},{5,6}) is EFX", _ex4_efx),
    Claim("ex4-no-efx3", "example4: no EFX3 allocation among all 64", _ex4_no_efx3),
    Claim("ex4-unions", "example4: the unions of A with C and with D violate EFX3", _ex4_unions),
    Claim("ex5-sets", "example5: largest positive set N = {1,2}", _ex5_sets),
    Claim("ex5-infeasible", "example5: bad receiver {3} gives a non-EF1 allocation", _ex5_infeasible),
    Claim("ex5-feasible", "example5: the feasible receiver set gives EFX3", _ex5_feasible),
    Claim("ex5-witness", "example5: agent 3 is the envier in the infeasible run", _ex5_witness),
    Claim("lemma2-binary", "lemma2: alg_binary with N = {1} gives both goods to agent 1", _lemma2_binary),
    Claim("lemma2-round-robin", "lemma2: order (1,2) deals bad 3 to agent 1 and bad 4 to agent 2",
          _lemma2_round_robin),
    Claim("lemma2-alg2", "lemma2: nash-max-min-tertiary returns ({1,2,3},{4}) with EW -1", _lemma2_alg2),
    Claim("lemma2-mew", "lemma2: max EW is 0 by giving everything to agent 1", _lemma2_mew),
    Claim("lemma2-no-efx3-mew", "lemma2: no allocation is both EFX3 and MEW", _lemma2_no_efx3_mew),
    Claim("ex6-m4", "example6 (m=4): EFX worst/optimal dNW = 32/36; algorithm returns B", _ex6(4)),
    Claim("ex6-m6", "example6 (m=6): EFX worst/optimal dNW = 72/81; algorithm returns B", _ex6(6)),
    Claim("ex6-m8", "example6 (m=8): EFX worst/optimal dNW = 128/144; algorithm returns B", _ex6(8)),
    Claim("ex6-bound", "example6 (m=4): ratio meets 1/1.061 but not 1/1.060", _ex6_bound),
    Claim("leximin-efx", "Leximin allocations are EFX for identical pure goods", _leximin_pure_goods),
    Claim("ex6-welfare-b", "example6 (m=4): NW(B) = dNW(B) = 36", _ex6_nw_b),
]


def run_claims(fixture_dir=None, claims=None) -> list[ClaimResult]:
    """Evaluate every claim. Missing fixtures propagate as :class:`MissingFixtureError`."""
    fx = Fixtures(fixture_dir)
    results = []
    for claim in claims or CLAIMS:
        try:
            passed = bool(claim.check(fx))
            detail = ""
        except MissingFixtureError:
            raise
        except Exception as exc:  # a crash inside a claim counts as a failed claim
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(ClaimResult(claim.id, claim.text, passed, detail))
    return results
