"""
halg/group_core.py

Finite groups as Cayley tables, their subgroups, and left coset spaces:
 - build_group(table, names): validated FiniteGroup (Latin square, identity, associativity)
 - group_from_permutations(degree, generators): closes permutations under composition,
   element names in cycle notation
 - subgroup / generated_subgroup / all_subgroups / is_normal
 - coset_space(H): the left cosets xH, the projection q and the action x(yH) = (xy)H

Elements are integer indices into the Cayley table. Permutation groups list their
elements in lexicographic order of the image arrays, so the identity is index 0.
Products of permutations compose right to left: (a·b)(i) = a(b(i)).

Usage:
    from halg.group_core import group_from_permutations, generated_subgroup, coset_space
    S3 = group_from_permutations(3, [[1, 0, 2], [1, 2, 0]], name="S3")
    H = generated_subgroup(S3, [S3.index("(0 1)")])
    space = coset_space(H)
    space.count        # 3
    H.is_normal()      # False
"""

from __future__ import annotations

import re
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .config import CLOSURE_BOUND, SUBGROUP_BOUND
from .errors import (
    GroupTooLarge,
    MissingIdentity,
    NoIdentity,
    NotAPermutation,
    NotAssociative,
    NotClosed,
    NotLatinSquare,
    SpecFormatError,
    UnknownElement,
)
from .log import get_logger

log = get_logger("halg.group_core")

IDENTITY_ALIASES = ("e", "()", "id")


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


# -------------------------
# Permutation helpers
# -------------------------
def cycle_notation(perm: Sequence[int]) -> str:
    """Disjoint-cycle name of a permutation, fixed points omitted; the identity is 'e'."""
    seen = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cycle = [i]
        seen.add(i)
        j = int(perm[i])
        while j != i:
            cycle.append(j)
            seen.add(j)
            j = int(perm[j])
        cycles.append("(" + " ".join(str(c) for c in cycle) + ")")
    return "".join(cycles) or "e"


def parse_cycles(text: str, degree: int) -> tuple:
    """
    Parse cycle notation into an image tuple. Accepts "(0 1 2)", "(0,1,2)",
    "(012)" (single-digit points) and products "(0 1)(0 2)", which compose
    right to left like group elements do.
    """
    compact = text.strip()
    if compact in IDENTITY_ALIASES or compact == "":
        return tuple(range(degree))
    if not re.fullmatch(r"(\([^()]*\)\s*)+", compact):
        raise UnknownElement(f"{text!r} is not in cycle notation")
    perm = list(range(degree))
    for body in re.findall(r"\(([^()]*)\)", compact):
        body = body.strip()
        if not body:
            continue
        if re.search(r"[\s,]", body):
            tokens = [t for t in re.split(r"[\s,]+", body) if t]
        else:
            tokens = list(body) if degree <= 10 else [body]
        try:
            points = [int(t) for t in tokens]
        except ValueError:
            raise UnknownElement(f"{text!r}: cycle ({body}) has a non-integer point")
        if len(set(points)) != len(points) or any(p < 0 or p >= degree for p in points):
            raise UnknownElement(f"{text!r}: cycle ({body}) is not a cycle on 0..{degree - 1}")
        cyc = list(range(degree))
        for a, b in zip(points, points[1:] + points[:1]):
            cyc[a] = b
        perm = [perm[cyc[i]] for i in range(degree)]
    return tuple(perm)


def _check_permutation(gen, degree: int) -> np.ndarray:
    try:
        p = np.asarray(gen, dtype=np.int64)
    except (TypeError, ValueError):
        raise NotAPermutation(f"{gen!r} is not a list of integers")
    if p.shape != (degree,) or not np.array_equal(np.sort(p), np.arange(degree)):
        raise NotAPermutation(f"{list(gen)} is not a permutation of 0..{degree - 1}")
    return p


def _permutation_table(perms: np.ndarray) -> np.ndarray:
    """Composition table of lexicographically sorted permutations."""
    count, degree = perms.shape
    table = np.zeros((count, count), dtype=np.int64)
    if degree == 0:
        return table
    if degree ** degree < 2 ** 62:
        # base-degree keys keep lexicographic order, so lookups are a searchsorted
        weights = degree ** np.arange(degree - 1, -1, -1, dtype=np.int64)
        keys = perms @ weights
        for a in range(count):
            table[a] = np.searchsorted(keys, perms[a][perms] @ weights)
    else:
        lookup = {p.tobytes(): i for i, p in enumerate(perms)}
        for a in range(count):
            table[a] = [lookup[row.tobytes()] for row in perms[a][perms]]
    return table


# -------------------------
# Groups
# -------------------------
class FiniteGroup:
    """
    Immutable Cayley-table group. ``table[a, b]`` is the index of a·b.
    Permutation groups also carry ``perms`` (one image row per element).
    """

    def __init__(
        self,
        table: np.ndarray,
        identity: int,
        inverse: np.ndarray,
        names: Sequence[str],
        name: str = "G",
        perms: Optional[np.ndarray] = None,
    ):
        self.table = _frozen(table)
        self.order = int(self.table.shape[0])
        self.identity = int(identity)
        self.inverse = _frozen(inverse)
        self.names = tuple(names)
        self.name = name
        self.perms = None if perms is None else _frozen(perms)
        self.degree = None if perms is None else int(self.perms.shape[1])
        self._index = {n: i for i, n in enumerate(self.names)}
        self._perm_index = None
        if self.perms is not None:
            self._perm_index = {tuple(row.tolist()): i for i, row in enumerate(self.perms)}

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, *elements: int) -> int:
        acc = self.identity
        for g in elements:
            acc = int(self.table[acc, g])
        return acc

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def index(self, name) -> int:
        """Element index for a display name (whitespace-insensitive; cycle notation for permutation groups)."""
        text = str(name).strip()
        if text in self._index:
            return self._index[text]
        collapsed = " ".join(text.split())
        if collapsed in self._index:
            return self._index[collapsed]
        if self._perm_index is not None:
            perm = parse_cycles(text, self.degree)
            if perm in self._perm_index:
                return self._perm_index[perm]
        elif text in IDENTITY_ALIASES:
            return self.identity
        raise UnknownElement(f"{name!r} is not an element of {self.name}")


def build_group(table, names: Optional[Sequence[str]] = None, name: str = "G",
                check_associativity: bool = True, perms: Optional[np.ndarray] = None) -> FiniteGroup:
    """
    Validate a Cayley table and return the group it defines.
    Raises NotLatinSquare, NoIdentity or NotAssociative naming the failing row/triple.
    """
    try:
        t = np.asarray(table)
    except (TypeError, ValueError):
        raise NotLatinSquare("table is not a rectangular array")
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotLatinSquare(f"table must be a non-empty square array, got shape {t.shape}")
    if not np.issubdtype(t.dtype, np.integer):
        if not np.issubdtype(t.dtype, np.number) or not np.all(np.mod(t, 1) == 0):
            raise NotLatinSquare("table entries must be integers")
    t = t.astype(np.int64)
    n = t.shape[0]

    if names is None:
        names = [str(i) for i in range(n)]
    names = [str(x) for x in names]
    if len(names) != n or len(set(names)) != n:
        raise SpecFormatError(f"names must be {n} distinct strings")

    bad = np.argwhere((t < 0) | (t >= n))
    if bad.size:
        r, c = bad[0]
        raise NotLatinSquare(f"entry table[{r}][{c}] = {t[r, c]} is outside 0..{n - 1}")

    expected = np.arange(n)
    rows_ok = (np.sort(t, axis=1) == expected).all(axis=1)
    if not rows_ok.all():
        r = int(np.flatnonzero(~rows_ok)[0])
        raise NotLatinSquare(f"row {r} ({names[r]}) repeats an element")
    cols_ok = (np.sort(t, axis=0) == expected[:, None]).all(axis=0)
    if not cols_ok.all():
        c = int(np.flatnonzero(~cols_ok)[0])
        raise NotLatinSquare(f"column {c} ({names[c]}) repeats an element")

    unit = [e for e in range(n) if np.array_equal(t[e], expected) and np.array_equal(t[:, e], expected)]
    if not unit:
        raise NoIdentity("no element e with e·a = a·e = a for every a")
    e = unit[0]

    if check_associativity:
        for a in range(n):
            left = t[t[a]]       # (a·b)·c at [b, c]
            right = t[a][t]      # a·(b·c) at [b, c]
            diff = np.argwhere(left != right)
            if diff.size:
                b, c = (int(v) for v in diff[0])
                raise NotAssociative(
                    f"({names[a]}·{names[b]})·{names[c]} = {names[left[b, c]]} "
                    f"but {names[a]}·({names[b]}·{names[c]}) = {names[right[b, c]]}"
                )

    inverse = np.argmax(t == e, axis=1)
    if not np.all(t[inverse, expected] == e):
        a = int(np.flatnonzero(t[inverse, expected] != e)[0])
        raise NotAssociative(f"right inverse of {names[a]} is not a left inverse")

    group = FiniteGroup(t, e, inverse, names, name=name, perms=perms)
    log.info("built group %s of order %d", name, n)
    return group


def group_from_permutations(degree: int, generators: Iterable, name: Optional[str] = None,
                            bound: Optional[int] = None) -> FiniteGroup:
    """Close the generators under composition (orbit algorithm) and tabulate the result."""
    bound = CLOSURE_BOUND if bound is None else bound
    if degree < 1:
        raise NotAPermutation(f"degree must be positive, got {degree}")
    gens = [_check_permutation(g, degree) for g in generators]

    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[i] for i in g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > bound:
                        raise GroupTooLarge(f"closure exceeds {bound} elements")
        frontier = nxt

    perms = np.array(sorted(seen), dtype=np.int64).reshape(len(seen), degree)
    table = _permutation_table(perms)
    names = [cycle_notation(p) for p in perms]
    label = name or f"Perm{degree}<{len(gens)} gens>"
    return build_group(table, names, name=label, check_associativity=False, perms=perms)


# -------------------------
# Subgroups
# -------------------------
class Subgroup:
    """A validated subgroup; ``members`` is the sorted array of element indices."""

    def __init__(self, parent: FiniteGroup, members: Iterable[int], generators: Optional[Sequence[int]] = None):
        self.parent = parent
        self.members = _frozen(sorted({int(m) for m in members}))
        self.size = int(self.members.size)
        self.generators = tuple(int(g) for g in generators) if generators is not None else None
        self._member_set = frozenset(self.members.tolist())
        self._normal: Optional[bool] = None

    def __contains__(self, g: int) -> bool:
        return int(g) in self._member_set

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other._member_set == self._member_set

    def __hash__(self) -> int:
        return hash((id(self.parent), self._member_set))

    def __repr__(self) -> str:
        return f"Subgroup({self.label()} in {self.parent.name})"

    def is_normal(self) -> bool:
        if self._normal is None:
            self._normal = is_normal(self)
        return self._normal

    def label(self) -> str:
        if self.generators is not None:
            gens = [self.parent.names[g] for g in self.generators if g != self.parent.identity]
            if gens:
                return "<" + ", ".join(gens) + ">"
        return "{" + ", ".join(self.parent.names[m] for m in self.members) + "}"


def subgroup(G: FiniteGroup, members: Iterable[int]) -> Subgroup:
    """Validate an explicit member set; raises MissingIdentity or NotClosed (with the offending pair)."""
    m = sorted({int(x) for x in members})
    if not m:
        raise MissingIdentity("a subgroup needs at least the identity")
    if m[0] < 0 or m[-1] >= G.order:
        raise UnknownElement(f"member indices must lie in 0..{G.order - 1}")
    if G.identity not in m:
        raise MissingIdentity(f"identity {G.names[G.identity]} is not in the set")
    idx = np.array(m)
    mask = np.zeros(G.order, dtype=bool)
    mask[idx] = True
    prods = G.table[np.ix_(idx, idx)]
    bad = np.argwhere(~mask[prods])
    if bad.size:
        a, b = idx[bad[0][0]], idx[bad[0][1]]
        raise NotClosed(f"{G.names[a]}·{G.names[b]} = {G.names[G.table[a, b]]} is not in the set")
    bad_inv = idx[~mask[G.inverse[idx]]]
    if bad_inv.size:
        a = bad_inv[0]
        raise NotClosed(f"inverse of {G.names[a]} is not in the set")
    return Subgroup(G, m)


def _closure(G: FiniteGroup, generators: Sequence[int]) -> np.ndarray:
    gens = np.array(sorted({int(g) for g in generators}), dtype=np.int64)
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size and gens.size:
        prods = np.unique(G.table[np.ix_(frontier, gens)])
        frontier = prods[~mask[prods]]
        mask[frontier] = True
    return np.flatnonzero(mask)


def generated_subgroup(G: FiniteGroup, generators: Sequence[int]) -> Subgroup:
    """The smallest subgroup containing the generators (empty list gives the trivial subgroup)."""
    for g in generators:
        if not 0 <= int(g) < G.order:
            raise UnknownElement(f"element index {g} outside 0..{G.order - 1}")
    return Subgroup(G, _closure(G, generators), generators=list(generators))


def all_subgroups(G: FiniteGroup, bound: Optional[int] = None) -> List[Subgroup]:
    """
    Every subgroup of G, smallest first, each tagged with normality.
    Grows subgroups one generator at a time from the trivial one, which reaches all of them.
    """
    bound = SUBGROUP_BOUND if bound is None else bound
    if G.order > bound:
        raise GroupTooLarge(f"{G.name} has order {G.order} > subgroup enumeration bound {bound}")
    trivial = frozenset([G.identity])
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for K in frontier:
            for g in range(G.order):
                if g in K:
                    continue
                J = frozenset(_closure(G, sorted(K) + [g]).tolist())
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    result = [Subgroup(G, s) for s in sorted(found, key=lambda s: (len(s), sorted(s)))]
    for H in result:
        H.is_normal()
    log.info("%s has %d subgroups", G.name, len(result))
    return result


def is_normal(H: Subgroup) -> bool:
    """True iff g·h·g⁻¹ ∈ H for every g ∈ G, h ∈ H."""
    G = H.parent
    mask = np.zeros(G.order, dtype=bool)
    mask[H.members] = True
    conj = G.table[G.table[:, H.members], G.inverse[:, None]]
    return bool(mask[conj].all())


# -------------------------
# Coset spaces
# -------------------------
class CosetSpace:
    """
    Left cosets of H in G. Coset c has representative ``rep[c]``; ``coset_of`` is q.
    Coset indices follow the canonical (minimal) representatives; a space built with
    other representatives keeps the same indices.
    """

    def __init__(self, subgroup: Subgroup, coset_of: np.ndarray, rep: np.ndarray):
        self.subgroup = subgroup
        self.group = subgroup.parent
        self.coset_of = _frozen(coset_of)
        self.rep = _frozen(rep)
        self.count = int(self.rep.size)
        self.h_size = subgroup.size
        order = np.argsort(self.coset_of, kind="stable")
        self.members = _frozen(order.reshape(self.count, self.h_size))
        self.canonical = bool(np.array_equal(self.rep, self.members[:, 0]))
        self._action = None

    def __repr__(self) -> str:
        return f"CosetSpace({self.group.name}/{self.subgroup.label()}, {self.count} cosets)"

    def __len__(self) -> int:
        return self.count

    def q(self, g: int) -> int:
        return int(self.coset_of[g])

    def act(self, x: int, c: int) -> int:
        """x·(yH) = (xy)H as a coset index."""
        return int(self.coset_of[self.group.table[x, self.rep[c]]])

    def action_table(self) -> np.ndarray:
        """[x, c] -> index of x·c; independent of the representatives."""
        if self._action is None:
            table = self.coset_of[self.group.table[:, self.rep]]
            table.setflags(write=False)
            self._action = table
        return self._action

    def coset_name(self, c: int) -> str:
        return self.group.names[self.members[c, 0]]

    def coset_index(self, name) -> int:
        """Coset containing the named element (any member names its coset)."""
        return self.q(self.group.index(name))

    def compatible(self, other: "CosetSpace") -> bool:
        return other is self or (other.group is self.group and np.array_equal(other.coset_of, self.coset_of))

    def with_representatives(self, rep: Sequence[int]) -> "CosetSpace":
        rep = np.asarray(rep, dtype=np.int64)
        if rep.shape != (self.count,) or not np.array_equal(self.coset_of[rep], np.arange(self.count)):
            raise UnknownElement("representatives must list one element of each coset, in coset order")
        return CosetSpace(self.subgroup, self.coset_of, rep)

    def random_representatives(self, rng: np.random.Generator) -> "CosetSpace":
        picks = rng.integers(0, self.h_size, size=self.count)
        return self.with_representatives(self.members[np.arange(self.count), picks])

    def inverse_coset(self, c: int) -> int:
        """(cH)⁻¹ = c⁻¹H; only representative-independent when H is normal."""
        return int(self.coset_of[self.group.inverse[self.rep[c]]])


def coset_space(H: Subgroup) -> CosetSpace:
    G = H.parent
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            coset_of[G.table[g, H.members]] = len(reps)
            reps.append(g)
    log.info("coset space %s/%s: %d cosets", G.name, H.label(), len(reps))
    return CosetSpace(H, coset_of, np.array(reps, dtype=np.int64))
