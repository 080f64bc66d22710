"""
``fairdiv`` command line.

    fairdiv solve INSTANCE --algorithm NAME [-o OUT] [--trace PATH]
    fairdiv check INSTANCE ALLOCATION --props ef1,efx,po-exhaustive
    fairdiv oracle {max,min,po,find,leximin,ratio} INSTANCE [options]
    fairdiv paper-examples [--fixtures DIR]

Exit codes: 0 success (or every checked property holds), 1 usage or parse
error, 2 utility-class precondition violated, 3 oracle enumeration cap
exceeded, 4 a checked property or example assertion fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from fairdiv import __version__, fairness, oracle
from fairdiv.algorithms import ALGORITHMS
from fairdiv.io import FormatError, allocation_to_json, parse_allocation, parse_instance
from fairdiv.model import InvalidAllocationError, PreconditionError, require_valid
from fairdiv.paper_examples import CLAIMS, run_claims
from fairdiv.welfare import WelfareKind

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_CAP = 3
EXIT_FAILS = 4

PO_PROPS = {"po-identical": "identical-fast", "po-tertiary": "tertiary-fast", "po-exhaustive": "exhaustive"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; we reserve 2 for precondition failures."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- output helpers ---------------------------------------------------------


def _emit(args, text: str, doc: dict) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _alloc_doc(alloc, inst):
    if alloc is None:
        return None
    return allocation_to_json(alloc, inst)["bundles"]


def _ids(text: str | None, limit: int, what: str):
    if text is None:
        return None
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            x = int(part)
        except ValueError:
            raise UsageError(f"{what}: {part!r} is not an integer id") from None
        if not 1 <= x <= limit:
            raise UsageError(f"{what}: id {x} outside 1..{limit}")
        out.append(x - 1)
    return out


def _items(text: str | None, inst):
    if text is None:
        return None
    named = {
        "all": inst.items,
        "goods": inst.mixed_goods,
        "mixed-goods": inst.mixed_goods,
        "bads": inst.pure_bads,
        "pure-bads": inst.pure_bads,
        "dummies": inst.dummy_bads,
        "dummy-bads": inst.dummy_bads,
    }
    key = text.strip().lower()
    if key in named:
        return list(named[key])
    return _ids(text, inst.m, "--items")


def _welfare(text: str) -> WelfareKind:
    try:
        return WelfareKind.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands ---------------------------------------------------------------


def cmd_solve(args) -> int:
    inst = parse_instance(args.instance)
    alloc, trace = ALGORITHMS[args.algorithm](inst)
    require_valid(inst, alloc)
    doc = allocation_to_json(alloc, inst)
    if args.output:
        Path(args.output).write_text(json.dumps(doc) + "\n")
    if args.trace:
        Path(args.trace).write_text(json.dumps(trace.to_json(), indent=2) + "\n")
    utils = alloc.utilities(inst)
    text = f"{args.algorithm}: {alloc}\nutilities: {' '.join(map(str, utils))}"
    _emit(args, text, {"algorithm": args.algorithm, **doc, "utilities": list(utils)})
    return EXIT_OK


def _check_one(inst, alloc, prop: str) -> dict:
    if prop in PO_PROPS:
        strategy = PO_PROPS[prop]
        if strategy == "exhaustive":
            res = oracle.pareto_optimal_exhaustive(inst, alloc)
            lines = [] if res.holds else [f"  dominated by {res.dominator}"]
            return {"property": prop, "holds": res.holds, "lines": lines,
                    "dominator": _alloc_doc(res.dominator, inst)}
        holds = fairness.check_po(inst, alloc, strategy)
        return {"property": prop, "holds": holds, "lines": []}
    report = fairness.get_checker(prop)(inst, alloc)
    return {
        "property": prop,
        "holds": report.holds,
        "lines": [f"  {w}" for w in report.witnesses],
        "witnesses": [
            {"envier": w.envier + 1, "envied": w.envied + 1,
             "item": None if w.item is None else w.item + 1, "code": w.code, "layer": w.layer}
            for w in report.witnesses
        ],
    }


def cmd_check(args) -> int:
    props = [p.strip().lower() for p in args.props.split(",") if p.strip()]
    if not props:
        raise UsageError("--props is empty")
    for p in props:
        if p not in PO_PROPS:
            try:
                fairness.get_checker(p)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    inst = parse_instance(args.instance)
    alloc = parse_allocation(args.allocation, inst)
    require_valid(inst, alloc)
    results = [_check_one(inst, alloc, p) for p in props]
    lines = []
    for r in results:
        lines.append(f"{r['property']}: {'holds' if r['holds'] else 'fails'}")
        lines.extend(r["lines"])
    for r in results:
        del r["lines"]
    _emit(args, "\n".join(lines), {"allocation": _alloc_doc(alloc, inst), "results": results})
    return EXIT_OK if all(r["holds"] for r in results) else EXIT_FAILS


def _oracle_welfare(args, inst, agents, items) -> int:
    kind = _welfare(args.welfare)
    if args.query == "max":
        res = oracle.max_welfare(inst, agents, items, kind, args.cap)
    else:
        res = oracle.min_welfare(inst, agents, items, kind, args.cap, each_nonempty=args.each_nonempty)
    word = "max" if res.maximize else "min"
    if res.optimum is None:
        text = f"no allocation qualifies ({res.scanned} allocations scanned)"
    else:
        shown = "\n".join(f"  {A}" for A in res.optimizers)
        more = f"\n  ... ({res.count - len(res.optimizers)} more)" if res.count > len(res.optimizers) else ""
        text = (f"{word} {kind.value}: {res.optimum}\n"
                f"optimizers ({res.count} of {res.scanned} allocations):\n{shown}{more}")
    doc = {
        "objective": kind.value,
        "maximize": res.maximize,
        "agents": [a + 1 for a in res.agents],
        "items": [o + 1 for o in res.items],
        "optimum": res.optimum,
        "count": res.count,
        "scanned": res.scanned,
        "optimizers": [_alloc_doc(A, inst) for A in res.optimizers],
    }
    _emit(args, text, doc)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = parse_instance(args.instance)
    agents = _ids(args.agents, inst.n, "--agents")
    items = _items(args.items, inst)
    q = args.query
    if q in ("max", "min"):
        return _oracle_welfare(args, inst, agents, items)
    if q == "po":
        alloc = parse_allocation(args.allocation, inst)
        require_valid(inst, alloc)
        res = oracle.pareto_optimal_exhaustive(inst, alloc, args.cap)
        text = "pareto optimal" if res.holds else f"not pareto optimal; dominated by {res.dominator}"
        text += f" ({res.scanned} allocations scanned)"
        _emit(args, text, {"holds": res.holds, "dominator": _alloc_doc(res.dominator, inst),
                           "scanned": res.scanned})
        return EXIT_OK
    if q == "find":
        _prop_or_usage(args.prop)
        res = oracle.find_fair(inst, args.prop, agents, items, args.cap)
        if res.found:
            text = f"{args.prop}: {res.allocation} (after {res.scanned} allocations)"
        else:
            text = f"{args.prop}: none exists ({res.scanned} allocations scanned)"
        _emit(args, text, {"property": args.prop, "found": res.found,
                           "allocation": _alloc_doc(res.allocation, inst), "scanned": res.scanned})
        return EXIT_OK
    if q == "leximin":
        alloc = oracle.leximin(inst, agents, items, args.cap)
        utils = alloc.utilities(inst)
        text = f"leximin: {alloc}\nutilities: {' '.join(map(str, utils))}"
        _emit(args, text, {"allocation": _alloc_doc(alloc, inst), "utilities": list(utils)})
        return EXIT_OK
    # ratio
    _prop_or_usage(args.prop)
    kind = _welfare(args.welfare)
    res = oracle.worst_case_ratio(inst, args.prop, kind, agents, items, args.cap)
    if res.exists:
        geo = (res.worst / res.optimum) ** (1 / res.n) if res.optimum else float("nan")
        text = (f"{args.prop} worst {kind.value}: {res.worst} vs optimum {res.optimum} "
                f"(n={res.n}, geometric ratio {geo:.4f}, {res.fair_count} fair allocations)\n"
                f"worst allocation: {res.worst_allocation}")
    else:
        text = f"{args.prop}: no fair allocation; optimum {kind.value} {res.optimum}"
    _emit(args, text, {
        "property": args.prop, "objective": kind.value, "worst": res.worst, "optimum": res.optimum,
        "n": res.n, "fair_count": res.fair_count, "worst_allocation": _alloc_doc(res.worst_allocation, inst),
    })
    return EXIT_OK


def _prop_or_usage(prop):
    if prop is None:
        raise UsageError("this query needs --prop")
    try:
        fairness.get_checker(prop)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_paper_examples(args) -> int:
    claims = CLAIMS
    if args.only:
        wanted = {x.strip() for x in args.only.split(",")}
        unknown = wanted - {c.id for c in CLAIMS}
        if unknown:
            raise UsageError(f"unknown assertion id(s): {', '.join(sorted(unknown))}")
        claims = [c for c in CLAIMS if c.id in wanted]
    results = run_claims(args.fixtures, claims)
    failed = [r for r in results if not r.passed]
    lines = []
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.id:<20} {r.text}"
        if r.detail:
            line += f"  ({r.detail})"
        lines.append(line)
    lines.append(f"{len(results) - len(failed)}/{len(results)} passed")
    _emit(args, "\n".join(lines), {
        "passed": len(results) - len(failed),
        "total": len(results),
        "results": [{"id": r.id, "text": r.text, "passed": r.passed, "detail": r.detail} for r in results],
    })
    if failed:
        print("failing: " + ", ".join(r.id for r in failed), file=sys.stderr)
        return EXIT_FAILS
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS,
                        help="output format (default text)")

    parser = _Parser(prog="fairdiv", description="Fair division of indivisible mixed manna.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="run an allocation algorithm")
    p.add_argument("instance")
    p.add_argument("-a", "--algorithm", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("-o", "--output", help="write the allocation JSON here")
    p.add_argument("--trace", metavar="PATH", help="write the step-by-step trace JSON here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", parents=[common], help="check fairness and efficiency properties")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.add_argument("--props", default="ef1,efx",
                   help="comma list of ef, ef1, efx, efx3, po-identical, po-tertiary, po-exhaustive, xyz:X:Y:Z")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive search over all allocations")
    p.add_argument("query", choices=("max", "min", "po", "find", "leximin", "ratio"))
    p.add_argument("instance")
    p.add_argument("--welfare", default="nw", help="nw, dnw or ew (max, min, ratio)")
    p.add_argument("--agents", help="comma list of 1-indexed agents (default all)")
    p.add_argument("--items", help="comma list of 1-indexed items, or goods/bads/dummies/all")
    p.add_argument("--prop", help="fairness property (find, ratio)")
    p.add_argument("--allocation", help="allocation file (po)")
    p.add_argument("--each-nonempty", action="store_true", help="min: every agent gets an item")
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP, help="max allocations to enumerate")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("paper-examples", parents=[common], help="replay the bundled worked examples")
    p.add_argument("--fixtures", metavar="DIR", help="fixture directory (default: bundled)")
    p.add_argument("--only", help="comma list of assertion ids")
    p.set_defaults(func=cmd_paper_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"{exc}\n", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.command == "oracle" and args.query == "po" and not args.allocation:
        print("fairdiv: oracle po needs --allocation", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fairdiv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, InvalidAllocationError) as exc:
        print(f"fairdiv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"fairdiv: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except oracle.CapExceededError as exc:
        print(f"fairdiv: {exc.count} allocations to enumerate, above the cap of {exc.cap}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
