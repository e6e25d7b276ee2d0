"""
halg/quotient_algebra.py

The convolution algebra M(G/H):
 - AlgebraContext(space, method): the pair (M(G/H), *) with a Direct or Embed evaluation path
 - convolve_Q(ctx, ν, ω): ν*ω(φ) = ∫∫∫ φ(xξyH) dλ_H(ξ) dν(xH) dω(yH)
 - dirac_convolve(ctx, x, y): δ_{xH}*δ_{yH} = ∫_H δ_{xξyH} dλ_H(ξ)
 - identity_report(ctx): right identity δ_{eH} always; two-sided identity iff H is normal
 - involution_check(ctx): quotient-group involution for normal H, obstruction otherwise

The Direct path contracts against a structure tensor S[a, b, c] = #{ξ ∈ H : q(rep[a]·ξ·rep[b]) = c} / |H|,
built from exact integer counts. The Embed path is T̃(m_ν * m_ω).

Usage:
    from halg.quotient_algebra import AlgebraContext, convolve_Q, identity_report
    ctx = AlgebraContext(space)                    # Direct
    nu_omega = convolve_Q(ctx, nu, omega)
    identity_report(ctx).has_identity              # == space.subgroup.is_normal()
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from .config import DEFAULT_TRIALS, get_tolerance
from .errors import NotNormal, SpaceMismatch
from .group_core import CosetSpace
from .io_json import measure_entries
from .log import get_logger
from .measure_space import MeasureQ, convolve_G, dirac_Q, project, random_Q, section, tv_norm

log = get_logger("halg.quotient_algebra")

# certified gap for the non-normal identity residual
OBSTRUCTION_GAP = 1e-3


class ConvolutionMethod(str, Enum):
    DIRECT = "direct"
    EMBED = "embed"


class AlgebraContext:
    """(M(G/H), *) for one coset space; caches the structure tensor."""

    def __init__(self, space: CosetSpace, method: ConvolutionMethod = ConvolutionMethod.DIRECT):
        self.space = space
        self.method = ConvolutionMethod(method)
        self._structure: Optional[np.ndarray] = None

    def __repr__(self) -> str:
        return f"AlgebraContext({self.space!r}, method={self.method.value})"

    def with_method(self, method: ConvolutionMethod) -> "AlgebraContext":
        other = AlgebraContext(self.space, method)
        other._structure = self._structure
        return other

    def structure(self) -> np.ndarray:
        if self._structure is None:
            self._structure = structure_tensor(self.space)
        return self._structure


def structure_tensor(space: CosetSpace) -> np.ndarray:
    """S[a, b, c] = #{ξ ∈ H : q(rep[a]·ξ·rep[b]) = c} / |H| (read-only, k×k×k)."""
    G, k = space.group, space.count
    H = space.subgroup.members
    counts = np.zeros((k, k, k), dtype=np.int64)
    b_idx = np.broadcast_to(np.arange(k)[None, :], (H.size, k))
    for a in range(k):
        left = G.table[space.rep[a], H]                        # rep[a]·ξ
        cosets = space.coset_of[G.table[left[:, None], space.rep[None, :]]]
        np.add.at(counts[a], (b_idx, cosets), 1)
    S = counts / space.h_size
    S.setflags(write=False)
    return S


def _check_space(ctx: AlgebraContext, *measures: MeasureQ) -> None:
    for m in measures:
        if not isinstance(m, MeasureQ) or not ctx.space.compatible(m.space):
            raise SpaceMismatch(f"measure does not live on {ctx.space!r}")


# -------------------------
# Convolution
# -------------------------
def convolve_Q(ctx: AlgebraContext, nu: MeasureQ, omega: MeasureQ) -> MeasureQ:
    _check_space(ctx, nu, omega)
    if ctx.method is ConvolutionMethod.EMBED:
        return project(ctx.space, convolve_G(section(nu), section(omega)))
    w = np.einsum("a,b,abc->c", nu.weights, omega.weights, ctx.structure())
    return MeasureQ(ctx.space, w)


def dirac_convolve(ctx: AlgebraContext, x: int, y: int) -> MeasureQ:
    """(1/|H|) Σ_ξ δ_{q(x·ξ·y)}; total mass exactly 1."""
    space = ctx.space
    G = space.group
    cosets = space.coset_of[G.table[G.table[x, space.subgroup.members], y]]
    w = np.bincount(cosets, minlength=space.count) / space.h_size
    return MeasureQ(space, w)


def left_identity_defect(ctx: AlgebraContext) -> Dict[str, Any]:
    """max_b ‖δ_{eH}*δ_{bH} − δ_{bH}‖ with the coset that attains it."""
    space = ctx.space
    e = dirac_Q(space, space.q(space.group.identity))
    worst, witness = 0.0, 0
    for b in range(space.count):
        d = dirac_Q(space, b)
        defect = tv_norm(convolve_Q(ctx, e, d) - d)
        if defect > worst:
            worst, witness = defect, b
    return {"defect": worst, "witness": space.coset_name(witness)}


# -------------------------
# Identity
# -------------------------
@dataclass
class IdentityReport:
    has_right_identity: bool
    has_identity: bool
    identity: Optional[MeasureQ]
    is_normal: bool
    residual: float
    right_identity_residual: float = 0.0
    left_identity_defect: float = 0.0
    defect_witness: Optional[str] = None

    @property
    def consistent(self) -> bool:
        return self.has_identity == self.is_normal

    def to_dict(self) -> Dict[str, Any]:
        return {
            "has_right_identity": self.has_right_identity,
            "has_identity": self.has_identity,
            "identity": None if self.identity is None else measure_entries(self.identity),
            "is_normal": self.is_normal,
            "residual": self.residual,
            "right_identity_residual": self.right_identity_residual,
            "left_identity_defect": self.left_identity_defect,
            "defect_witness": self.defect_witness,
        }


def identity_report(ctx: AlgebraContext, tol: Optional[float] = None) -> IdentityReport:
    """
    Least-squares search for ε with ε*δ_b = δ_b and δ_b*ε = δ_b for every basis coset b.
    has_identity iff the residual (Euclidean) is at most τ.
    """
    tol = get_tolerance() if tol is None else tol
    space = ctx.space
    k = space.count
    S = ctx.structure()
    eye = np.eye(k)
    # ε*δ_b = Σ_a ε_a S[a, b, :]   and   δ_b*ε = Σ_a ε_a S[b, a, :]
    left_rows = np.concatenate([S[:, b, :].T for b in range(k)])
    right_rows = np.concatenate([S[b, :, :].T for b in range(k)])
    A = np.concatenate([left_rows, right_rows])
    rhs = np.concatenate([eye.reshape(-1), eye.reshape(-1)])
    eps, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    residual = float(np.linalg.norm(A @ eps - rhs))

    e = dirac_Q(space, space.q(space.group.identity))
    right_residual = max(
        (tv_norm(convolve_Q(ctx, dirac_Q(space, b), e) - dirac_Q(space, b)) for b in range(k)),
        default=0.0,
    )
    normal = space.subgroup.is_normal()
    has_identity = residual <= tol
    defect = left_identity_defect(ctx)
    report = IdentityReport(
        has_right_identity=right_residual <= tol,
        has_identity=has_identity,
        identity=e if has_identity else None,
        is_normal=normal,
        residual=residual,
        right_identity_residual=right_residual,
        left_identity_defect=defect["defect"],
        defect_witness=defect["witness"] if defect["defect"] > 0 else None,
    )
    if not report.consistent:
        log.error("identity search disagrees with normality for %r: residual=%.3g normal=%s",
                  space, residual, normal)
    return report


# -------------------------
# Involution
# -------------------------
def star(ctx: AlgebraContext, nu: MeasureQ) -> MeasureQ:
    """ν*(cH) = conj(ν((cH)⁻¹)), the quotient-group involution (normal H only)."""
    space = ctx.space
    if not space.subgroup.is_normal():
        raise NotNormal(f"{space.subgroup.label()} is not normal in {space.group.name}; G/H is not a group")
    _check_space(ctx, nu)
    inv = np.array([space.inverse_coset(c) for c in range(space.count)])
    return MeasureQ(space, np.conj(nu.weights[inv]))


@dataclass
class InvolutionReport:
    is_normal: bool
    has_involution: bool
    verified: bool
    max_error: float
    trials: int
    obstruction: Optional[str] = None
    identity_residual: Optional[float] = None
    right_identity_residual: Optional[float] = None
    errors: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "is_normal": self.is_normal,
            "has_involution": self.has_involution,
            "verified": self.verified,
            "max_error": self.max_error,
            "trials": self.trials,
            "obstruction": self.obstruction,
            "identity_residual": self.identity_residual,
            "right_identity_residual": self.right_identity_residual,
            "errors": dict(self.errors),
        }


def involution_check(ctx: AlgebraContext, rng: Optional[np.random.Generator] = None,
                     trials: int = DEFAULT_TRIALS, tol: Optional[float] = None) -> InvolutionReport:
    """
    Normal H: verify (ν*ω)* = ω* * ν*, ν** = ν and ‖ν*‖ = ‖ν‖ on random pairs.
    Otherwise report why no involution exists: δ_{eH} is a right identity, an involution
    would turn it into a two-sided identity, and identity_report finds none.
    """
    tol = get_tolerance() if tol is None else tol
    rng = np.random.default_rng(0) if rng is None else rng
    space = ctx.space
    if not space.subgroup.is_normal():
        report = identity_report(ctx, tol)
        certified = report.has_right_identity and not report.has_identity and report.residual > OBSTRUCTION_GAP
        return InvolutionReport(
            is_normal=False,
            has_involution=False,
            verified=certified,
            max_error=0.0,
            trials=0,
            obstruction=(
                f"δ_eH is a right identity (residual {report.right_identity_residual:.3g}) but no two-sided "
                f"identity exists (least-squares residual {report.residual:.3g}); an involution would make "
                f"δ_eH* a left identity, so none exists"
            ),
            identity_residual=report.residual,
            right_identity_residual=report.right_identity_residual,
        )

    errors = {"anti_multiplicative": 0.0, "involutive": 0.0, "isometric": 0.0}
    for _ in range(trials):
        nu, omega = random_Q(space, rng), random_Q(space, rng)
        lhs = star(ctx, convolve_Q(ctx, nu, omega))
        rhs = convolve_Q(ctx, star(ctx, omega), star(ctx, nu))
        errors["anti_multiplicative"] = max(errors["anti_multiplicative"], lhs.max_distance(rhs))
        errors["involutive"] = max(errors["involutive"], star(ctx, star(ctx, nu)).max_distance(nu))
        errors["isometric"] = max(errors["isometric"], abs(tv_norm(star(ctx, nu)) - tv_norm(nu)))
    worst = max(errors.values())
    return InvolutionReport(
        is_normal=True,
        has_involution=True,
        verified=worst <= tol,
        max_error=worst,
        trials=trials,
        errors=errors,
    )
