"""
halg/catalog.py

Built-in groups and the verification catalog:
 - cyclic(n), dihedral(n), symmetric(n), alternating(n), quaternion(), klein()
 - get_group(name): "Z6", "D4", "S3", "S4", "A4", "Q8", "V4" (case-insensitive)
 - resolve_group(ref): catalog name or path to a group spec JSON file
 - resolve_subgroup(G, generators): subgroup generated by element names
 - catalog_cases(): the (group, subgroup) pairs listed in presets/catalog_cases.json

Groups are cached, so the same name always yields the same FiniteGroup object.

Usage:
    from halg.catalog import get_group, resolve_subgroup
    G = get_group("S3")
    H = resolve_subgroup(G, ["(0 1)"])
"""

from __future__ import annotations

import json
import os
import re
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import UnknownGroup
from .group_core import (
    FiniteGroup,
    Subgroup,
    all_subgroups,
    build_group,
    generated_subgroup,
    group_from_permutations,
)
from .io_json import read_group_spec
from .log import get_logger

log = get_logger("halg.catalog")

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
PRESETS_PATH = os.path.join(BASE_DIR, "presets", "catalog_cases.json")
with open(PRESETS_PATH, "r", encoding="utf-8") as f:
    PRESETS = json.load(f)

# quaternion units 1, i, j, k: UNIT_PRODUCT[a][b] = (sign, unit) of a·b
UNIT_PRODUCT = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]
QUATERNION_NAMES = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


def _cycle(points: Sequence[int], degree: int) -> List[int]:
    perm = list(range(degree))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        perm[a] = b
    return perm


# -------------------------
# Families
# -------------------------
def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return build_group((idx[:, None] + idx[None, :]) % n, name=f"Z{n}", check_associativity=False)


def dihedral(n: int, name: Optional[str] = None) -> FiniteGroup:
    """Symmetries of the regular n-gon (order 2n); D1 ≅ Z2 and D2 is the Klein four-group."""
    name = name or f"D{n}"
    if n == 1:
        return group_from_permutations(2, [[1, 0]], name=name)
    if n == 2:
        return group_from_permutations(4, [[1, 0, 3, 2], [2, 3, 0, 1]], name=name)
    rotation = [(i + 1) % n for i in range(n)]
    reflection = [(-i) % n for i in range(n)]
    return group_from_permutations(n, [rotation, reflection], name=name)


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return group_from_permutations(1, [], name="S1")
    return group_from_permutations(n, [_cycle([0, 1], n), _cycle(list(range(n)), n)], name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    gens = [_cycle([0, 1, i], n) for i in range(2, n)]
    return group_from_permutations(n, gens, name=f"A{n}")


def quaternion() -> FiniteGroup:
    table = np.zeros((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            sign_a, unit_a = (1 if a % 2 == 0 else -1), a // 2
            sign_b, unit_b = (1 if b % 2 == 0 else -1), b // 2
            s, u = UNIT_PRODUCT[unit_a][unit_b]
            s *= sign_a * sign_b
            table[a, b] = 2 * u + (0 if s > 0 else 1)
    return build_group(table, QUATERNION_NAMES, name="Q8")


def klein() -> FiniteGroup:
    return dihedral(2, name="V4")


# -------------------------
# Lookup
# -------------------------
FIXED = {"Q8": quaternion, "V4": klein}
LISTED = [f"Z{n}" for n in range(1, 13)] + [f"D{n}" for n in range(3, 7)] + ["V4", "S3", "S4", "A4", "Q8"]


def get_group(name: str) -> FiniteGroup:
    return _cached_group(name.strip().upper())


@lru_cache(maxsize=None)
def _cached_group(key: str) -> FiniteGroup:
    if key in FIXED:
        return FIXED[key]()
    m = re.fullmatch(r"([ZDSA])(\d+)", key)
    if m:
        family, n = m.group(1), int(m.group(2))
        if family == "Z" and n >= 1:
            return cyclic(n)
        if family == "D" and 1 <= n <= 12:
            return dihedral(n)
        if family == "S" and 1 <= n <= 7:
            return symmetric(n)
        if family == "A" and 3 <= n <= 7:
            return alternating(n)
    raise UnknownGroup(f"{key!r} is not a catalog group (try one of {', '.join(LISTED)})")


def list_groups() -> List[Dict]:
    out = []
    for name in LISTED:
        G = get_group(name)
        out.append({"name": name, "order": G.order, "abelian": G.is_abelian()})
    return out


def resolve_group(ref: str) -> FiniteGroup:
    """Catalog name, or a path to a group spec JSON file."""
    path = Path(ref)
    if path.suffix.lower() == ".json" or path.exists():
        return read_group_spec(path)
    return get_group(ref)


def split_generators(text: str) -> List[str]:
    """'(0 1); (1 2)' or '(0 1),(1 2)' -> ['(0 1)', '(1 2)']; empty text -> []."""
    return [t.strip() for t in re.split(r"[;,](?![^()]*\))", text or "") if t.strip()]


def resolve_subgroup(G: FiniteGroup, generators: Sequence[str]) -> Subgroup:
    return generated_subgroup(G, [G.index(g) for g in generators])


def catalog_cases() -> List[Dict]:
    """Expand the preset file into concrete {"group", "generators"} pairs, deduplicated by member set."""
    cases = []
    for entry in PRESETS["cases"]:
        names = [f"{entry['family']}{n}" for n in entry["n"]] if "family" in entry else [entry["group"]]
        for gname in names:
            G = get_group(gname)
            seen = set()
            if entry["subgroups"] == "all":
                subs = [[G.names[g] for g in _generators_of(G, H)] for H in all_subgroups(G)]
            else:
                subs = entry["subgroups"]
            for gens in subs:
                H = resolve_subgroup(G, gens)
                key = tuple(H.members.tolist())
                if key in seen:
                    continue
                seen.add(key)
                cases.append({"group": gname, "generators": list(gens)})
    log.info("catalog expands to %d cases", len(cases))
    return cases


def _generators_of(G: FiniteGroup, H: Subgroup) -> List[int]:
    """A small generating set for H, built greedily from its members."""
    gens: List[int] = []
    span = {G.identity}
    for m in H.members.tolist():
        if m not in span:
            gens.append(m)
            span = set(generated_subgroup(G, gens).members.tolist())
    return gens
