"""
halg/io_json.py

JSON readers and writers for halg's files:
 - group spec:  {"name", "order", "table": [[...]]} or {"name", "degree", "generators": [[...]]}
 - measure:     {"kind": "G"|"Q", "entries": [{"at": name, "re": x, "im": y}]}
 - function:    same schema with "kind": "fn"
 - rho:         {"rho": [{"coset": name, "value": x}]}
 - reports:     any dict, written with sorted keys

Unlisted points read as zero and zero entries are not written. Coset names are the
name of the coset's canonical representative; any member is accepted on input.

Usage:
    G = read_group_spec("s3.json")
    nu = read_measure("nu.json", space=space)
    write_json(measure_to_dict(nu), "out.json")
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .errors import HalgError, KindMismatch, SpecFormatError
from .group_core import CosetSpace, FiniteGroup, build_group, group_from_permutations
from .lebesgue_quotient import QuotientFunction
from .log import get_logger
from .measure_space import MeasureG, MeasureQ

log = get_logger("halg.io_json")

PathLike = Union[str, Path]


# -------------------------
# Plain JSON
# -------------------------
def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise SpecFormatError(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})")


def write_json(obj: Any, path: PathLike) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps(obj))
    log.info("wrote %s", path)
    return path


def _require(data: Dict, key: str, where: str):
    if not isinstance(data, dict) or key not in data:
        raise SpecFormatError(f"{where}: missing key {key!r}")
    return data[key]


# -------------------------
# Group specs
# -------------------------
def group_from_dict(data: Dict, where: str = "group spec") -> FiniteGroup:
    name = str(data.get("name", "G")) if isinstance(data, dict) else "G"
    if isinstance(data, dict) and "table" in data:
        table = data["table"]
        order = data.get("order")
        if order is not None and len(table) != int(order):
            raise SpecFormatError(f"{where}: order {order} but the table has {len(table)} rows")
        return build_group(table, data.get("names"), name=name)
    if isinstance(data, dict) and "generators" in data:
        degree = _require(data, "degree", where)
        try:
            return group_from_permutations(int(degree), data["generators"], name=name)
        except (TypeError, ValueError) as e:
            raise SpecFormatError(f"{where}: bad generators ({e})")
    raise SpecFormatError(f"{where}: needs either 'table' or 'degree' + 'generators'")


def read_group_spec(path: PathLike) -> FiniteGroup:
    return group_from_dict(load_json(path), where=str(path))


def group_to_dict(G: FiniteGroup) -> Dict[str, Any]:
    return {"name": G.name, "order": G.order, "names": list(G.names), "table": G.table.tolist()}


# -------------------------
# Measures and functions
# -------------------------
def _entries(values: np.ndarray, names: List[str]) -> List[Dict[str, Any]]:
    return [
        {"at": names[i], "re": float(values[i].real), "im": float(values[i].imag)}
        for i in np.flatnonzero(values)
    ]


def coset_names(space: CosetSpace) -> List[str]:
    return [space.coset_name(c) for c in range(space.count)]


def measure_entries(m) -> List[Dict[str, Any]]:
    """Nonzero point masses of a MeasureG or MeasureQ as {"at", "re", "im"} dicts."""
    names = list(m.group.names) if isinstance(m, MeasureG) else coset_names(m.space)
    return _entries(m.weights, names)


def measure_to_dict(m) -> Dict[str, Any]:
    return {"kind": m.kind, "entries": measure_entries(m)}


def function_to_dict(phi) -> Dict[str, Any]:
    return {"kind": "fn", "entries": _entries(phi.values, coset_names(phi.space))}


def _read_entries(data: Dict, size: int, locate, where: str) -> np.ndarray:
    entries = _require(data, "entries", where)
    if not isinstance(entries, list):
        raise SpecFormatError(f"{where}: 'entries' must be a list")
    values = np.zeros(size, dtype=np.complex128)
    for i, entry in enumerate(entries):
        at = _require(entry, "at", f"{where} entry {i}")
        try:
            re_part = float(entry.get("re", 0.0))
            im_part = float(entry.get("im", 0.0))
        except (TypeError, ValueError):
            raise SpecFormatError(f"{where} entry {i}: re/im must be numbers")
        try:
            idx = locate(at)
        except HalgError as e:
            raise SpecFormatError(f"{where} entry {i}: {e}")
        values[idx] += complex(re_part, im_part)
    return values


def measure_from_dict(data: Dict, group: Optional[FiniteGroup] = None, space: Optional[CosetSpace] = None,
                      where: str = "measure"):
    kind = _require(data, "kind", where)
    if kind == "G":
        G = group if group is not None else (space.group if space is not None else None)
        if G is None:
            raise KindMismatch(f"{where}: a measure on G needs a group")
        return MeasureG(G, _read_entries(data, G.order, G.index, where))
    if kind == "Q":
        if space is None:
            raise KindMismatch(f"{where}: a measure on G/H needs a coset space")
        return MeasureQ(space, _read_entries(data, space.count, space.coset_index, where))
    raise SpecFormatError(f"{where}: kind must be 'G' or 'Q', got {kind!r}")


def read_measure(path: PathLike, group: Optional[FiniteGroup] = None, space: Optional[CosetSpace] = None):
    return measure_from_dict(load_json(path), group=group, space=space, where=str(path))


def function_from_dict(data: Dict, space: CosetSpace, where: str = "function"):
    kind = _require(data, "kind", where)
    if kind != "fn":
        raise SpecFormatError(f"{where}: kind must be 'fn', got {kind!r}")
    return QuotientFunction(space, _read_entries(data, space.count, space.coset_index, where))


def read_operand(path: PathLike, space: CosetSpace):
    """A measure on G/H ('kind': 'Q') or a function on G/H ('kind': 'fn') from one file."""
    data = load_json(path)
    if isinstance(data, dict) and data.get("kind") == "fn":
        return function_from_dict(data, space, where=str(path))
    return measure_from_dict(data, space=space, where=str(path))


# -------------------------
# Rho files
# -------------------------
def rho_from_dict(data: Dict, space: CosetSpace, where: str = "rho") -> np.ndarray:
    """Per-coset ρ values; every coset must be given exactly once."""
    items = _require(data, "rho", where)
    if not isinstance(items, list):
        raise SpecFormatError(f"{where}: 'rho' must be a list")
    values = np.full(space.count, np.nan)
    for i, item in enumerate(items):
        at = _require(item, "coset", f"{where} entry {i}")
        try:
            c = space.coset_index(at)
            value = float(_require(item, "value", f"{where} entry {i}"))
        except HalgError as e:
            raise SpecFormatError(f"{where} entry {i}: {e}")
        except (TypeError, ValueError):
            raise SpecFormatError(f"{where} entry {i}: value must be a number")
        if not np.isnan(values[c]):
            raise SpecFormatError(f"{where}: coset {space.coset_name(c)}H listed twice")
        values[c] = value
    missing = np.flatnonzero(np.isnan(values))
    if missing.size:
        raise SpecFormatError(f"{where}: no value for coset {space.coset_name(int(missing[0]))}H")
    return values


def read_rho(path: PathLike, space: CosetSpace) -> np.ndarray:
    return rho_from_dict(load_json(path), space, where=str(path))


def rho_to_dict(sys) -> Dict[str, Any]:
    names = coset_names(sys.space)
    return {"rho": [{"coset": names[c], "value": float(v)} for c, v in enumerate(sys.rho_on_cosets)]}
