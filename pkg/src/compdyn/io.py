"""JSON for spaces, maps and reports.

Rationals are written as ``"num/den"`` strings, floats with 17 significant
digits, ``EXIT`` as the string ``"EXIT"``. Output is canonical (sorted keys)
so that identical inputs give byte-identical files.
"""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import math
from fractions import Fraction
from typing import Any

from .dynamics import EXIT, AtomMap
from .measure import AtomicSpace, MeasurableSet, to_number


def encode_number(x) -> Any:
    if isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return float(format(x, ".17g"))
    return x


def to_jsonable(obj) -> Any:
    """Recursively convert results into JSON-ready values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, float, Fraction)):
        return encode_number(obj)
    if isinstance(obj, complex):
        return {"re": encode_number(obj.real), "im": encode_number(obj.imag)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, MeasurableSet):
        return sorted(obj.block_ids)
    if isinstance(obj, (AtomicSpace,)):
        return space_to_json(obj)
    if isinstance(obj, AtomMap):
        return map_to_json(obj)
    if hasattr(obj, "_asdict"):
        return {k: to_jsonable(v) for k, v in obj._asdict().items()}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.init or f.repr}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    # mpmath numbers and intervals
    if hasattr(obj, "a") and hasattr(obj, "b"):
        return [float(obj.a), float(obj.b)]
    try:
        return encode_number(float(obj))
    except (TypeError, ValueError):
        return repr(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def space_to_json(space: AtomicSpace) -> dict:
    out = {
        "atoms": space.n_atoms,
        "weights": [encode_number(w) for w in space.weights],
        "blocks": [list(b) for b in space.blocks],
        "tail_mass": encode_number(space.tail_mass),
    }
    if space.labels is not None:
        out["labels"] = [list(x) if isinstance(x, tuple) else x for x in space.labels]
    if space.name:
        out["name"] = space.name
    return out


def map_to_json(f: AtomMap) -> dict:
    out = {"forward": ["EXIT" if t == EXIT else t for t in f.forward]}
    if f.open_atoms:
        out["open_atoms"] = sorted(f.open_atoms)
    if f.name:
        out["name"] = f.name
    return out


def _field(doc: dict, key: str, where: str):
    if key not in doc:
        raise ValueError(f"{where}: missing field '{key}'")
    return doc[key]


def space_from_json(doc: dict) -> AtomicSpace:
    weights = [to_number(w) for w in _field(doc, "weights", "space")]
    n = doc.get("atoms", len(weights))
    if n != len(weights):
        raise ValueError(f"space: field 'atoms' says {n} but 'weights' has {len(weights)} entries")
    blocks = doc.get("blocks") or [[a] for a in range(n)]
    labels = doc.get("labels")
    if labels is not None:
        labels = [tuple(x) if isinstance(x, list) else x for x in labels]
    try:
        return AtomicSpace(
            tuple(weights), tuple(tuple(b) for b in blocks), to_number(doc.get("tail_mass", "0")), labels,
            doc.get("name", ""),
        )
    except ValueError as exc:
        raise ValueError(f"space: {exc}") from None


def map_from_json(doc: dict) -> AtomMap:
    forward = _field(doc, "forward", "map")
    try:
        fwd = tuple(EXIT if t == "EXIT" else int(t) for t in forward)
        return AtomMap(fwd, doc.get("name", ""), frozenset(doc.get("open_atoms", ())))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"map: field 'forward': {exc}") from None


def system_to_json(space: AtomicSpace, f: AtomMap, A: MeasurableSet | None = None) -> dict:
    out = {"space": space_to_json(space), "map": map_to_json(f)}
    if A is not None:
        out["A"] = sorted(A.block_ids)
    return out


def system_from_json(doc: dict) -> tuple[AtomicSpace, AtomMap, MeasurableSet | None]:
    space = space_from_json(_field(doc, "space", "system"))
    f = map_from_json(_field(doc, "map", "system"))
    if len(f) != space.n_atoms:
        raise ValueError(f"map: field 'forward' has {len(f)} entries for {space.n_atoms} atoms")
    A = doc.get("A")
    if A is not None:
        bad = [b for b in A if not 0 <= b < space.n_blocks]
        if bad:
            raise ValueError(f"system: field 'A' names unknown blocks {bad}")
        A = MeasurableSet(frozenset(A))
    return space, f, A


def fingerprint(space: AtomicSpace, f: AtomMap) -> str:
    canonical = json.dumps(system_to_json(space, f), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
