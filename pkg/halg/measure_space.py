"""
halg/measure_space.py

Complex measures on G and on G/H as dense weight vectors:
 - MeasureG / MeasureQ values (immutable, total-variation norm)
 - project(space, m): T̃m(E) = m(q⁻¹(E))
 - section(ν): m_ν, the right-H-invariant measure with T̃m_ν = ν and ‖m_ν‖ = ‖ν‖
 - is_right_H_invariant(space, m): membership in M(G:H)
 - convolve_G(m, n): the convolution of M(G)
 - module_action(space, m, ν): m⋆ν, the left M(G)-module structure of M(G/H)
 - is_absolutely_continuous(m1, m2)

Usage:
    from halg.measure_space import MeasureQ, section, project
    nu = MeasureQ(space, [2j, 4])
    section(nu).weights      # [1j, 2, 1j, 2] for Z4 / {0, 2}
    project(space, section(nu)) == nu
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

from .config import get_tolerance
from .errors import GroupMismatch, KindMismatch, SpaceMismatch
from .group_core import CosetSpace, FiniteGroup, Subgroup
from .log import get_logger

log = get_logger("halg.measure_space")


def _frozen_complex(values, size: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True).reshape(-1)
    if arr.size != size:
        raise KindMismatch(f"{what} needs {size} weights, got {arr.size}")
    arr.setflags(write=False)
    return arr


class _Measure:
    kind = ""

    weights: np.ndarray

    def __len__(self) -> int:
        return int(self.weights.size)

    def norm(self) -> float:
        return tv_norm(self)

    def max_distance(self, other: "_Measure") -> float:
        self._check_same(other)
        return float(np.max(np.abs(self.weights - other.weights), initial=0.0))

    def _check_same(self, other) -> None:
        raise NotImplementedError

    def _new(self, weights) -> "_Measure":
        raise NotImplementedError

    def __add__(self, other):
        self._check_same(other)
        return self._new(self.weights + other.weights)

    def __sub__(self, other):
        self._check_same(other)
        return self._new(self.weights - other.weights)

    def __neg__(self):
        return self._new(-self.weights)

    def __mul__(self, scalar: complex):
        return self._new(self.weights * scalar)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            self._check_same(other)
        except (GroupMismatch, SpaceMismatch, KindMismatch):
            return False
        return bool(np.array_equal(self.weights, other.weights))

    __hash__ = None


class MeasureG(_Measure):
    """m ∈ M(G); weights[g] = m({g})."""

    kind = "G"

    def __init__(self, group: FiniteGroup, weights):
        self.group = group
        self.weights = _frozen_complex(weights, group.order, f"a measure on {group.name}")

    def __repr__(self) -> str:
        return f"MeasureG({self.group.name}, norm={self.norm():.6g})"

    def _check_same(self, other) -> None:
        if not isinstance(other, MeasureG):
            raise KindMismatch(f"expected a measure on G, got {type(other).__name__}")
        if other.group is not self.group:
            raise GroupMismatch(f"measures live on {self.group.name} and {other.group.name}")

    def _new(self, weights) -> "MeasureG":
        return MeasureG(self.group, weights)


class MeasureQ(_Measure):
    """ν ∈ M(G/H); weights[c] = ν({c-th coset})."""

    kind = "Q"

    def __init__(self, space: CosetSpace, weights):
        self.space = space
        self.weights = _frozen_complex(weights, space.count, f"a measure on {space!r}")

    def __repr__(self) -> str:
        return f"MeasureQ({self.space.group.name}/{self.space.subgroup.label()}, norm={self.norm():.6g})"

    def _check_same(self, other) -> None:
        if not isinstance(other, MeasureQ):
            raise KindMismatch(f"expected a measure on G/H, got {type(other).__name__}")
        if not self.space.compatible(other.space):
            raise SpaceMismatch("measures live on different coset spaces")

    def _new(self, weights) -> "MeasureQ":
        return MeasureQ(self.space, weights)


AnyMeasure = Union[MeasureG, MeasureQ]


# -------------------------
# Constructors
# -------------------------
def dirac_G(group: FiniteGroup, x: int) -> MeasureG:
    w = np.zeros(group.order, dtype=np.complex128)
    w[x] = 1.0
    return MeasureG(group, w)


def dirac_Q(space: CosetSpace, c: int) -> MeasureQ:
    w = np.zeros(space.count, dtype=np.complex128)
    w[c] = 1.0
    return MeasureQ(space, w)


def dirac_coset(space: CosetSpace, x: int) -> MeasureQ:
    """δ_{xH} for an element x."""
    return dirac_Q(space, space.q(x))


def counting(group: FiniteGroup) -> MeasureG:
    """λ_G, the Haar measure of a finite group (each point mass 1)."""
    return MeasureG(group, np.ones(group.order))


def density(group: FiniteGroup, f) -> MeasureG:
    """λ_f: the measure with density f against counting measure."""
    return MeasureG(group, f)


def uniform_on_subgroup(H: Subgroup) -> MeasureG:
    """Normalized Haar measure of H pushed into G (mass 1/|H| on each member)."""
    w = np.zeros(H.parent.order, dtype=np.complex128)
    w[H.members] = 1.0 / H.size
    return MeasureG(H.parent, w)


def random_G(group: FiniteGroup, rng: np.random.Generator, support: Optional[float] = None) -> MeasureG:
    """Complex Gaussian weights; ``support`` keeps each point with that probability."""
    w = rng.standard_normal(group.order) + 1j * rng.standard_normal(group.order)
    if support is not None:
        w = w * (rng.random(group.order) < support)
    return MeasureG(group, w)


def random_Q(space: CosetSpace, rng: np.random.Generator, support: Optional[float] = None) -> MeasureQ:
    w = rng.standard_normal(space.count) + 1j * rng.standard_normal(space.count)
    if support is not None:
        w = w * (rng.random(space.count) < support)
    return MeasureQ(space, w)


# -------------------------
# Operations
# -------------------------
def tv_norm(m: AnyMeasure) -> float:
    return float(np.abs(m.weights).sum())


def _check_group(space: CosetSpace, m: MeasureG) -> None:
    if not isinstance(m, MeasureG):
        raise KindMismatch(f"expected a measure on G, got {type(m).__name__}")
    if m.group is not space.group:
        raise GroupMismatch(f"measure on {m.group.name} used with cosets of {space.group.name}")


def project(space: CosetSpace, m: MeasureG) -> MeasureQ:
    """T̃m: sum the weights over each coset. Norm-decreasing."""
    _check_group(space, m)
    w = np.zeros(space.count, dtype=np.complex128)
    np.add.at(w, space.coset_of, m.weights)
    return MeasureQ(space, w)


def section(nu: MeasureQ) -> MeasureG:
    """m_ν: spread each coset's mass evenly over its members."""
    space = nu.space
    return MeasureG(space.group, nu.weights[space.coset_of] / space.h_size)


def canonical_projection(space: CosetSpace, m: MeasureG) -> MeasureG:
    """m_{T̃m}, the projection of M(G) onto M(G:H)."""
    return section(project(space, m))


def invariance_defect(space: CosetSpace, m: MeasureG) -> float:
    """max |m({g·h}) − m({g})| over g ∈ G, h ∈ H."""
    _check_group(space, m)
    shifted = m.weights[space.group.table[:, space.subgroup.members]]
    return float(np.max(np.abs(shifted - m.weights[:, None]), initial=0.0))


def is_right_H_invariant(space: CosetSpace, m: MeasureG, tol: Optional[float] = None) -> bool:
    """m(Ah) = m(A) for all A ⊆ G, h ∈ H, i.e. m ∈ M(G:H)."""
    tol = get_tolerance() if tol is None else tol
    return invariance_defect(space, m) <= tol


def convolve_functions(group: FiniteGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a*b)(g) = Σ_x a(x)·b(x⁻¹g), for weight vectors or functions on G."""
    out = np.zeros(group.order, dtype=np.complex128)
    for x in np.flatnonzero(a):
        # row x of the table is a permutation, so this scatter has no collisions
        out[group.table[x]] += a[x] * b
    return out


def convolve_G(m: MeasureG, n: MeasureG) -> MeasureG:
    if not isinstance(m, MeasureG) or not isinstance(n, MeasureG):
        raise KindMismatch("convolve_G takes two measures on G")
    if m.group is not n.group:
        raise GroupMismatch(f"cannot convolve measures on {m.group.name} and {n.group.name}")
    return MeasureG(m.group, convolve_functions(m.group, m.weights, n.weights))


def module_action(space: CosetSpace, m: MeasureG, nu: MeasureQ) -> MeasureQ:
    """m⋆ν(φ) = ∫∫ φ(yxH) dm(y) dν(xH)."""
    _check_group(space, m)
    if not space.compatible(nu.space):
        raise SpaceMismatch("ν lives on a different coset space")
    action = space.action_table()
    out = np.zeros(space.count, dtype=np.complex128)
    for y in np.flatnonzero(m.weights):
        out[action[y]] += m.weights[y] * nu.weights
    return MeasureQ(space, out)


def is_absolutely_continuous(m1: AnyMeasure, m2: AnyMeasure, tol: Optional[float] = None) -> bool:
    """m1 ≪ m2: every point where m2 vanishes (|m2| ≤ τ) is also null for m1."""
    tol = get_tolerance() if tol is None else tol
    if type(m1) is not type(m2):
        raise KindMismatch(f"cannot compare {type(m1).__name__} with {type(m2).__name__}")
    m1._check_same(m2)
    null = np.abs(m2.weights) <= tol
    return bool(np.all(np.abs(m1.weights[null]) <= tol))
