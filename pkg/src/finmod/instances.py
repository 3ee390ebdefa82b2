"""The JSON instance format and canonical serialisation.

An instance file holds one module::

    {"name": "z4_z8", "orders": [4, 8], "notes": "...",
     "ring": {"name": "T2", "generators": [{"label": "e11", "matrix": [[1, 0], [0, 0]]}]}}

``ring`` is omitted for plain abelian groups.  Canonical text uses sorted
keys and no insignificant whitespace, so re-serialisation is byte-identical.
Integers beyond 2**53 are written as decimal strings and read back exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .abelian import MalformedInput
from .modules import RModule, module_from_matrices

SAFE_INT = 1 << 53


@dataclass(frozen=True)
class Instance:
    name: str
    orders: tuple[int, ...]
    generators: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...] = ()
    ring_name: str | None = None
    notes: str = ""
    extra: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def module(self) -> RModule:
        return module_from_matrices(self.orders, self.generators, self.name, self.ring_name)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "orders": list(self.orders)}
        if self.generators or self.ring_name:
            ring: dict[str, Any] = {
                "generators": [{"label": lab, "matrix": [list(r) for r in mat]} for lab, mat in self.generators]
            }
            if self.ring_name:
                ring["name"] = self.ring_name
            out["ring"] = ring
        if self.notes:
            out["notes"] = self.notes
        out.update(self.extra)
        return out


def encode(obj: Any) -> Any:
    """Replace integers that do not fit a double exactly by decimal strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(encode(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _int(v: Any, what: str) -> int:
    if isinstance(v, bool):
        raise MalformedInput(f"{what}: expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and v.lstrip("-").isdigit():
        return int(v)
    raise MalformedInput(f"{what}: expected an integer, got {v!r}")


def from_json(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise MalformedInput("instance must be a JSON object")
    if "orders" not in data:
        raise MalformedInput("instance needs an 'orders' list")
    if not isinstance(data["orders"], list):
        raise MalformedInput("'orders' must be a list")
    orders = tuple(_int(v, "orders") for v in data["orders"])
    if any(o < 1 for o in orders):
        raise MalformedInput("orders must be positive")
    gens: list[tuple[str, tuple[tuple[int, ...], ...]]] = []
    ring = data.get("ring")
    ring_name = None
    if ring is not None:
        if not isinstance(ring, dict) or not isinstance(ring.get("generators", []), list):
            raise MalformedInput("'ring' must be an object with a 'generators' list")
        ring_name = ring.get("name")
        for g in ring.get("generators", []):
            if not isinstance(g, dict) or "label" not in g or "matrix" not in g:
                raise MalformedInput("each ring generator needs 'label' and 'matrix'")
            mat = g["matrix"]
            if not isinstance(mat, list) or len(mat) != len(orders) or any(
                not isinstance(r, list) or len(r) != len(orders) for r in mat
            ):
                raise MalformedInput(f"generator {g['label']!r}: matrix must be {len(orders)}x{len(orders)}")
            gens.append((str(g["label"]), tuple(tuple(_int(v, "matrix") for v in r) for r in mat)))
    known = {"name", "orders", "ring", "notes"}
    extra = {k: v for k, v in data.items() if k not in known}
    inst = Instance(
        name=str(data.get("name", "")),
        orders=orders,
        generators=tuple(gens),
        ring_name=ring_name,
        notes=str(data.get("notes", "")),
        extra=extra,
    )
    inst.module()  # validates the action matrices
    return inst


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    return from_json(data)


def load(path: str | Path) -> Instance:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {p}: {exc.strerror}") from None
    inst = loads(text)
    if not inst.name:
        inst = Instance(p.stem, inst.orders, inst.generators, inst.ring_name, inst.notes, inst.extra)
    return inst


def dumps(inst: Instance) -> str:
    return canonical_json(inst.to_json())


def plain(orders, name: str | None = None, notes: str = "") -> Instance:
    orders = tuple(orders)
    return Instance(name or "_".join(f"z{d}" for d in orders) or "zero", orders, notes=notes)
