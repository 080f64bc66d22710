"""
JSON instance and allocation files. Ids in files are 1-indexed.

Instance::

    {"agents": 2, "items": 3, "utilities": [[2, -4, 1], [-4, 2, 1]],
     "agent_names": [...], "item_names": [...]}     # names optional

Allocation::

    {"bundles": [[2, 3], [1]], "scope": "all"}      # or an explicit id list
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from fairdiv.model import Allocation, Instance


class FormatError(ValueError):
    """Malformed instance or allocation file."""


class DimensionError(FormatError):
    pass


class UtilityTypeError(FormatError, TypeError):
    pass


@dataclass(frozen=True)
class InstanceFile:
    instance: Instance
    agent_names: tuple[str, ...] | None = None
    item_names: tuple[str, ...] | None = None


def _load_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


def _field(doc, key, where):
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected a JSON object at top level")
    if key not in doc:
        raise FormatError(f"{where}: missing field '{key}'")
    return doc[key]


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def instance_from_json(doc, where: str = "<instance>") -> InstanceFile:
    n = _field(doc, "agents", where)
    m = _field(doc, "items", where)
    rows = _field(doc, "utilities", where)
    if not _is_int(n) or n < 1:
        raise FormatError(f"{where}: field 'agents' must be a positive integer")
    if not _is_int(m) or m < 0:
        raise FormatError(f"{where}: field 'items' must be a non-negative integer")
    if not isinstance(rows, list) or len(rows) != n:
        raise DimensionError(f"{where}: field 'utilities' must have {n} rows")
    for a, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            raise DimensionError(f"{where}: utilities[{a}] must have {m} entries")
        for o, x in enumerate(row):
            if not _is_int(x):
                raise UtilityTypeError(f"{where}: utilities[{a}][{o}] is not an integer: {x!r}")
    names = {}
    for key, size in (("agent_names", n), ("item_names", m)):
        if key in doc:
            value = doc[key]
            if not isinstance(value, list) or len(value) != size or not all(isinstance(v, str) for v in value):
                raise FormatError(f"{where}: field '{key}' must be a list of {size} strings")
            names[key] = tuple(value)
    return InstanceFile(Instance(rows, m=m), names.get("agent_names"), names.get("item_names"))


def read_instance_file(path) -> InstanceFile:
    return instance_from_json(_load_json(path), str(path))


def parse_instance(path) -> Instance:
    return read_instance_file(path).instance


def instance_to_json(inst: Instance, agent_names=None, item_names=None) -> dict:
    doc = {"agents": inst.n, "items": inst.m, "utilities": [list(row) for row in inst.u]}
    if agent_names is not None:
        doc["agent_names"] = list(agent_names)
    if item_names is not None:
        doc["item_names"] = list(item_names)
    return doc


def dumps_instance(doc: dict) -> str:
    """JSON text with one utility row per line, so fixtures read like the tables."""
    lines = []
    for key, value in doc.items():
        if key == "utilities":
            rows = ",\n".join("    " + json.dumps(row) for row in value)
            text = "[\n" + rows + "\n  ]" if value else "[]"
        else:
            text = json.dumps(value)
        lines.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def write_instance_file(path, record: InstanceFile) -> None:
    doc = instance_to_json(record.instance, record.agent_names, record.item_names)
    Path(path).write_text(dumps_instance(doc))


def _ids(value, what, where, m):
    if not isinstance(value, list):
        raise FormatError(f"{where}: {what} must be a list of item ids")
    out = []
    for x in value:
        if not _is_int(x):
            raise FormatError(f"{where}: {what} contains a non-integer id {x!r}")
        if not 1 <= x <= m:
            raise FormatError(f"{where}: {what} contains item id {x} outside 1..{m}")
        out.append(x - 1)
    return out


def allocation_from_json(doc, inst: Instance, where: str = "<allocation>") -> Allocation:
    bundles = _field(doc, "bundles", where)
    if not isinstance(bundles, list) or len(bundles) != inst.n:
        raise DimensionError(f"{where}: field 'bundles' must have {inst.n} lists")
    parsed = [_ids(b, f"bundles[{a}]", where, inst.m) for a, b in enumerate(bundles)]
    scope = doc.get("scope", "all")
    if scope == "all":
        scope = list(inst.items)
    else:
        scope = _ids(scope, "scope", where, inst.m)
    return Allocation.of(parsed, scope)


def parse_allocation(path, inst: Instance) -> Allocation:
    return allocation_from_json(_load_json(path), inst, str(path))


def allocation_to_json(alloc: Allocation, inst: Instance) -> dict:
    scope = "all" if alloc.scope == frozenset(inst.items) else sorted(o + 1 for o in alloc.scope)
    return {"bundles": [[o + 1 for o in bundle] for bundle in alloc.as_lists()], "scope": scope}
