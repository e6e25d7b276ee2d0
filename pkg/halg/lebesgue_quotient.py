"""
halg/lebesgue_quotient.py

Rho-functions and the function algebra L¹(G/H):
 - RhoSystem: ρ on G (constant on left cosets) and the measure μ it induces via Weil's formula
 - T_rho / T_infinity: averaging maps from functions on G to functions on G/H
 - lift_rho: φ ↦ φ_ρ = (φ∘q)·ρ, the isometric right inverse of T_rho
 - translate_left / translate_right and the ξ-averaged translates _{xH}φ, φ_{xH}
 - convolve_L1: φ*ψ = T(φ_ρ * ψ_ρ), and the ideal actions φ*ν, ν*φ of M(G/H) on L¹(G/H)
 - left_identity_search_L1: a left identity exists iff H is normal
 - l1_star: the involution of L¹(G/H) for normal H

Haar conventions: λ_G is counting measure, λ_H has mass 1/|H| per point, so μ(cH) = |H|·ρ(c).
Functions on G are plain complex numpy vectors of length |G|.

Usage:
    sys = rho_system(space, [1.0, 3.0])
    phi = QuotientFunction(space, [1, 2j])
    T_rho(sys, lift_rho(sys, phi)) == phi
    convolve_L1(sys, phi, phi)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .config import RHO_RANGE, get_tolerance
from .errors import KindMismatch, NonPositiveRho, NotNormal, SpaceMismatch, SystemMismatch
from .group_core import CosetSpace
from .log import get_logger
from .measure_space import MeasureQ, convolve_functions

log = get_logger("halg.lebesgue_quotient")

# modular functions of a finite group and subgroup
MODULAR_G = 1.0
MODULAR_H = 1.0


class TranslationMode(str, Enum):
    L1 = "l1"
    LINF = "linf"


# -------------------------
# Values
# -------------------------
class QuotientFunction:
    """φ on G/H, one complex value per coset (the same carrier serves L¹, L^∞ and C_0)."""

    def __init__(self, space: CosetSpace, values):
        arr = np.array(values, dtype=np.complex128, copy=True).reshape(-1)
        if arr.size != space.count:
            raise KindMismatch(f"a function on {space!r} needs {space.count} values, got {arr.size}")
        arr.setflags(write=False)
        self.space = space
        self.values = arr

    def __repr__(self) -> str:
        return f"QuotientFunction({self.space.group.name}/{self.space.subgroup.label()})"

    def __len__(self) -> int:
        return int(self.values.size)

    def _check_same(self, other) -> None:
        if not isinstance(other, QuotientFunction):
            raise KindMismatch(f"expected a function on G/H, got {type(other).__name__}")
        if not self.space.compatible(other.space):
            raise SpaceMismatch("functions live on different coset spaces")

    def max_distance(self, other: "QuotientFunction") -> float:
        self._check_same(other)
        return float(np.max(np.abs(self.values - other.values), initial=0.0))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values), initial=0.0))

    def __add__(self, other):
        self._check_same(other)
        return QuotientFunction(self.space, self.values + other.values)

    def __sub__(self, other):
        self._check_same(other)
        return QuotientFunction(self.space, self.values - other.values)

    def __mul__(self, scalar: complex):
        return QuotientFunction(self.space, self.values * scalar)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            self._check_same(other)
        except (KindMismatch, SpaceMismatch):
            return False
        return bool(np.array_equal(self.values, other.values))

    __hash__ = None


class RhoSystem:
    """
    ρ(g) = rho_on_cosets[q(g)] and μ(c) = |H|·rho_on_cosets[c].
    λ(x, yH) = ρ(xy)/ρ(y) is the density dμ_x/dμ.
    """

    def __init__(self, space: CosetSpace, rho_on_cosets):
        r = np.array(rho_on_cosets, dtype=np.float64, copy=True).reshape(-1)
        if r.size != space.count:
            raise SystemMismatch(f"rho needs one value per coset ({space.count}), got {r.size}")
        bad = np.flatnonzero(~np.isfinite(r) | (r <= 0))
        if bad.size:
            c = int(bad[0])
            raise NonPositiveRho(f"rho must be positive; coset {space.coset_name(c)}H has {r[c]}")
        r.setflags(write=False)
        self.space = space
        self.rho_on_cosets = r
        rho = r[space.coset_of] * (MODULAR_H / MODULAR_G)
        rho.setflags(write=False)
        self.rho = rho
        mu = space.h_size * r
        mu.setflags(write=False)
        self.mu = mu

    def __repr__(self) -> str:
        return f"RhoSystem({self.space!r})"

    def compatible(self, other: "RhoSystem") -> bool:
        return other is self or (self.space.compatible(other.space) and np.array_equal(self.rho_on_cosets, other.rho_on_cosets))

    def with_space(self, space: CosetSpace) -> "RhoSystem":
        """Same ρ on a compatible space (typically other coset representatives)."""
        if not self.space.compatible(space):
            raise SpaceMismatch("rho system moved to an incompatible coset space")
        return RhoSystem(space, self.rho_on_cosets)

    def cocycle(self, x, c):
        """λ(x, cH) = ρ(x·rep[c]) / ρ(rep[c]); x and c broadcast like numpy indices."""
        rep = self.space.rep[c]
        return self.rho[self.space.group.table[x, rep]] / self.rho[rep]

    def l1_norm(self, phi: QuotientFunction) -> float:
        return float(np.sum(np.abs(phi.values) * self.mu))

    def pairing(self, phi: QuotientFunction, psi: QuotientFunction) -> complex:
        """⟨φ, ψ⟩_μ = Σ_c φ(c)·ψ(c)·μ(c), the L¹–L^∞ duality."""
        return complex(np.sum(phi.values * psi.values * self.mu))

    def mu_measure(self, phi: QuotientFunction) -> MeasureQ:
        """μ_φ: density φ against μ."""
        self._check(phi)
        return MeasureQ(self.space, phi.values * self.mu)

    def from_measure(self, nu: MeasureQ) -> QuotientFunction:
        """dν/dμ; every measure on a finite quotient is absolutely continuous w.r.t. μ."""
        if not self.space.compatible(nu.space):
            raise SpaceMismatch("measure does not live on this rho system's space")
        return QuotientFunction(self.space, nu.weights / self.mu)

    def _check(self, *fns: QuotientFunction) -> None:
        for phi in fns:
            if not isinstance(phi, QuotientFunction):
                raise KindMismatch(f"expected a QuotientFunction, got {type(phi).__name__}")
            if not self.space.compatible(phi.space):
                raise SystemMismatch("function does not live on this rho system's space")


def rho_system(space: CosetSpace, rho_on_cosets: Optional[Sequence[float]] = None) -> RhoSystem:
    """ρ ≡ 1 (the G-invariant measure μ = |H|·counting) when no values are given."""
    if rho_on_cosets is None:
        rho_on_cosets = np.ones(space.count)
    return RhoSystem(space, rho_on_cosets)


def random_rho_system(space: CosetSpace, rng: np.random.Generator) -> RhoSystem:
    lo, hi = RHO_RANGE
    return RhoSystem(space, np.exp(rng.uniform(np.log(lo), np.log(hi), size=space.count)))


def random_function(space: CosetSpace, rng: np.random.Generator) -> QuotientFunction:
    return QuotientFunction(space, rng.standard_normal(space.count) + 1j * rng.standard_normal(space.count))


def _function_on_G(space: CosetSpace, f) -> np.ndarray:
    arr = np.asarray(f, dtype=np.complex128).reshape(-1)
    if arr.size != space.group.order:
        raise KindMismatch(f"a function on {space.group.name} needs {space.group.order} values, got {arr.size}")
    return arr


def _coset_elements(space: CosetSpace) -> np.ndarray:
    """[c, j] -> rep[c]·ξ_j; follows the space's representatives."""
    return space.group.table[space.rep[:, None], space.subgroup.members[None, :]]


# -------------------------
# Weil's formula and the averaging maps
# -------------------------
def weil_sides(sys: RhoSystem, f) -> Tuple[complex, complex]:
    """(Σ_g f(g)ρ(g), Σ_c μ(c)·(1/|H|)·Σ_ξ f(rep[c]·ξ))."""
    f = _function_on_G(sys.space, f)
    lhs = complex(np.sum(f * sys.rho))
    rhs = complex(np.sum(sys.mu * f[_coset_elements(sys.space)].mean(axis=1)))
    return lhs, rhs


def weil_defect(sys: RhoSystem) -> float:
    """Largest gap between the two sides of Weil's formula over the standard basis of functions on G."""
    n = sys.space.group.order
    worst = 0.0
    for g in range(n):
        basis = np.zeros(n)
        basis[g] = 1.0
        lhs, rhs = weil_sides(sys, basis)
        worst = max(worst, abs(lhs - rhs))
    return worst


def T_rho(sys: RhoSystem, f) -> QuotientFunction:
    """T_ρf(c) = (1/|H|) Σ_ξ f(rep[c]·ξ) / ρ(rep[c]·ξ)."""
    f = _function_on_G(sys.space, f)
    M = _coset_elements(sys.space)
    return QuotientFunction(sys.space, (f[M] / sys.rho[M]).mean(axis=1))


def integral(sys: RhoSystem, phi: QuotientFunction) -> complex:
    """∫ φ dμ."""
    return complex(np.sum(phi.values * sys.mu))


def lift_rho(sys: RhoSystem, phi: QuotientFunction) -> np.ndarray:
    """φ_ρ(g) = φ(q(g))·ρ(g)."""
    sys._check(phi)
    return phi.values[sys.space.coset_of] * sys.rho


def T_infinity(space: CosetSpace, f) -> QuotientFunction:
    """T_∞f(c) = (1/|H|) Σ_ξ f(rep[c]·ξ)."""
    f = _function_on_G(space, f)
    return QuotientFunction(space, f[_coset_elements(space)].mean(axis=1))


def quasi_invariance_defect(sys: RhoSystem) -> float:
    """max |μ(x·c) − λ(x, c)·μ(c)| over x ∈ G and cosets c."""
    space = sys.space
    action = space.action_table()
    moved = sys.cocycle(np.arange(space.group.order)[:, None], np.arange(space.count)[None, :])
    return float(np.max(np.abs(sys.mu[action] - moved * sys.mu[None, :]), initial=0.0))


# -------------------------
# Translations
# -------------------------
def translate_left(sys: RhoSystem, x: int, phi: QuotientFunction) -> QuotientFunction:
    """𝓛_xφ(yH) = λ(x⁻¹, yH)·φ(x⁻¹yH)."""
    sys._check(phi)
    space = sys.space
    x_inv = space.group.inverse[x]
    moved = space.group.table[x_inv, space.rep]
    values = sys.cocycle(x_inv, np.arange(space.count)) * phi.values[space.coset_of[moved]]
    return QuotientFunction(space, values)


def translate_right(sys: RhoSystem, x: int, phi: QuotientFunction,
                    mode: TranslationMode = TranslationMode.L1) -> QuotientFunction:
    """
    L1:   𝓡_xφ = T(R_x φ_ρ), i.e. (1/|H|) Σ_ξ φ(q(rep·ξ·x))·ρ(rep·ξ·x)/ρ(rep)
    Linf: 𝓡_xφ(yH) = ∫_H φ(yξxH) dλ_H(ξ)
    """
    sys._check(phi)
    space = sys.space
    P = space.group.table[_coset_elements(space), x]
    vals = phi.values[space.coset_of[P]]
    if TranslationMode(mode) is TranslationMode.LINF:
        return QuotientFunction(space, vals.mean(axis=1))
    return QuotientFunction(space, (vals * sys.rho[P]).mean(axis=1) / sys.rho[space.rep])


def left_translate_fn(space: CosetSpace, x: int, phi: QuotientFunction) -> QuotientFunction:
    """_{xH}φ(yH) = ∫_H φ(xξyH) dλ_H(ξ)."""
    G = space.group
    left = G.table[x, space.subgroup.members]
    P = G.table[left[None, :], space.rep[:, None]]
    return QuotientFunction(space, phi.values[space.coset_of[P]].mean(axis=1))


def right_translate_fn(space: CosetSpace, x: int, phi: QuotientFunction) -> QuotientFunction:
    """φ_{xH}(yH) = ∫_H φ(yξxH) dλ_H(ξ)."""
    P = space.group.table[_coset_elements(space), x]
    return QuotientFunction(space, phi.values[space.coset_of[P]].mean(axis=1))


# -------------------------
# Convolution and ideal actions
# -------------------------
def convolve_L1(sys: RhoSystem, phi: QuotientFunction, psi: QuotientFunction) -> QuotientFunction:
    """φ*ψ = T(φ_ρ * ψ_ρ)."""
    sys._check(phi, psi)
    G = sys.space.group
    return T_rho(sys, convolve_functions(G, lift_rho(sys, phi), lift_rho(sys, psi)))


def convolve_L1_vector(sys: RhoSystem, phi: QuotientFunction, psi: QuotientFunction) -> QuotientFunction:
    """φ*ψ = Σ_y φ_ρ(y)·𝓛_yψ, evaluated without going through T."""
    sys._check(phi, psi)
    lifted = lift_rho(sys, phi)
    out = np.zeros(sys.space.count, dtype=np.complex128)
    for y in np.flatnonzero(lifted):
        out += lifted[y] * translate_left(sys, int(y), psi).values
    return QuotientFunction(sys.space, out)


def ideal_action_right(sys: RhoSystem, phi: QuotientFunction, nu: MeasureQ) -> QuotientFunction:
    """(φ*ν)(xH) = Σ_d ν(d)·Δ_G(y⁻¹)·(1/|H|)·Σ_ξ φ(xξy⁻¹H)·ρ(xξy⁻¹)/ρ(x), y = rep[d]."""
    sys._check(phi)
    if not sys.space.compatible(nu.space):
        raise SpaceMismatch("ν does not live on this rho system's space")
    space = sys.space
    G = space.group
    M = _coset_elements(space)
    out = np.zeros(space.count, dtype=np.complex128)
    for d in np.flatnonzero(nu.weights):
        P = G.table[M, G.inverse[space.rep[d]]]
        term = (phi.values[space.coset_of[P]] * sys.rho[P]).mean(axis=1) / sys.rho[space.rep]
        out += nu.weights[d] * (1.0 / MODULAR_G) * term
    return QuotientFunction(space, out)


def ideal_action_left(sys: RhoSystem, nu: MeasureQ, phi: QuotientFunction) -> QuotientFunction:
    """(ν*φ)(xH) = Σ_d ν(d)·(1/|H|)·Σ_ξ φ(ξy⁻¹xH)·λ(ξy⁻¹, xH), y = rep[d]."""
    sys._check(phi)
    if not sys.space.compatible(nu.space):
        raise SpaceMismatch("ν does not live on this rho system's space")
    space = sys.space
    G = space.group
    out = np.zeros(space.count, dtype=np.complex128)
    for d in np.flatnonzero(nu.weights):
        left = G.table[space.subgroup.members, G.inverse[space.rep[d]]]
        P = G.table[left[None, :], space.rep[:, None]]
        term = (phi.values[space.coset_of[P]] * sys.rho[P]).mean(axis=1) / sys.rho[space.rep]
        out += nu.weights[d] * term
    return QuotientFunction(space, out)


# -------------------------
# Identity and involution
# -------------------------
@dataclass
class LeftIdentityReport:
    has_left_identity: bool
    identity: Optional[QuotientFunction]
    residual: float
    is_normal: bool

    @property
    def consistent(self) -> bool:
        return self.has_left_identity == self.is_normal

    def to_dict(self) -> Dict[str, Any]:
        from .io_json import function_to_dict  # io_json imports this module

        return {
            "has_left_identity": self.has_left_identity,
            "identity": None if self.identity is None else function_to_dict(self.identity)["entries"],
            "residual": self.residual,
            "is_normal": self.is_normal,
        }


def left_identity_search_L1(sys: RhoSystem, tol: Optional[float] = None) -> LeftIdentityReport:
    """Least-squares search for η with η*φ = φ on every basis function φ."""
    tol = get_tolerance() if tol is None else tol
    space = sys.space
    k = space.count
    G = space.group
    basis = [QuotientFunction(space, np.eye(k)[b]) for b in range(k)]
    lifts = [lift_rho(sys, phi) for phi in basis]
    # A[(b, c), a] = (e_a * e_b)(c)
    A = np.zeros((k * k, k), dtype=np.complex128)
    for a in range(k):
        for b in range(k):
            A[b * k:(b + 1) * k, a] = T_rho(sys, convolve_functions(G, lifts[a], lifts[b])).values
    rhs = np.eye(k).reshape(-1).astype(np.complex128)
    eta, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    residual = float(np.linalg.norm(A @ eta - rhs))
    found = residual <= tol
    report = LeftIdentityReport(
        has_left_identity=found,
        identity=QuotientFunction(space, eta) if found else None,
        residual=residual,
        is_normal=space.subgroup.is_normal(),
    )
    if not report.consistent:
        log.error("L1 left identity search disagrees with normality for %r: residual=%.3g", space, residual)
    return report


def l1_star(sys: RhoSystem, phi: QuotientFunction) -> QuotientFunction:
    """φ*(c) = conj(φ(c⁻¹))·μ(c⁻¹)/μ(c), so that μ_{φ*} = (μ_φ)* (normal H only)."""
    space = sys.space
    if not space.subgroup.is_normal():
        raise NotNormal(f"{space.subgroup.label()} is not normal in {space.group.name}; L1(G/H) has no involution")
    sys._check(phi)
    inv = np.array([space.inverse_coset(c) for c in range(space.count)])
    return QuotientFunction(space, np.conj(phi.values[inv]) * sys.mu[inv] / sys.mu)
