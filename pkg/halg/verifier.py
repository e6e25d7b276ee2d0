"""
halg/verifier.py

Runs the property suite over (group, subgroup) cases and builds the JSON report:
 - CaseSpec: one case (group, generators, rho choice, trials, tolerance, seed)
 - run_case(spec): the fixed, ordered list of checks -> [CheckResult]
 - evaluate_case(spec): the same plus the identity / normality columns of the report
 - run_catalog(...): every case of presets/catalog_cases.json, optionally in a process pool

Each check gets its own generator keyed by (seed, case, check id), so verdicts do not
depend on case order or worker count. Exact identities are held to EXACT_TOLERANCE,
everything else to the case tolerance. Errors of comparisons are relative to
max(1, size of the reference value).

Usage:
    from halg.verifier import CaseSpec, run_case, run_catalog
    results = run_case(CaseSpec("S3", ("(0 1)",)))
    report = run_catalog(seed=7)
    report["summary"]["fail"]    # 0
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from functools import cached_property, partial
from multiprocessing import Pool
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .catalog import PRESETS, catalog_cases, resolve_group, resolve_subgroup
from .config import DEFAULT_SEED, DEFAULT_TRIALS, EXACT_TOLERANCE, REPORT_VERSION, WORKERS, get_tolerance
from .errors import HalgError, NotNormal, SpecFormatError, UnknownCheck
from .group_core import build_group, coset_space
from .io_json import function_to_dict, measure_to_dict
from .lebesgue_quotient import (
    QuotientFunction,
    RhoSystem,
    T_infinity,
    T_rho,
    TranslationMode,
    convolve_L1,
    convolve_L1_vector,
    ideal_action_left,
    ideal_action_right,
    integral,
    l1_star,
    left_identity_search_L1,
    left_translate_fn,
    lift_rho,
    quasi_invariance_defect,
    random_function,
    random_rho_system,
    rho_system,
    right_translate_fn,
    translate_left,
    translate_right,
    weil_defect,
)
from .log import get_logger
from .measure_space import (
    MeasureG,
    MeasureQ,
    canonical_projection,
    convolve_functions,
    convolve_G,
    counting,
    density,
    dirac_coset,
    dirac_G,
    dirac_Q,
    invariance_defect,
    is_absolutely_continuous,
    is_right_H_invariant,
    module_action,
    project,
    random_G,
    random_Q,
    section,
    tv_norm,
)
from .quotient_algebra import (
    AlgebraContext,
    ConvolutionMethod,
    convolve_Q,
    dirac_convolve,
    identity_report,
    involution_check,
    star,
)
from .seeding import rng_for

log = get_logger("halg.verifier")

PASS = "pass"
FAIL = "fail"
RHO_CHOICES = ("random", "ones")
# some basis Dirac must move by more than this under δ_eH* when H is not normal
LEFT_DEFECT_GAP = 0.1


# -------------------------
# Types
# -------------------------
@dataclass(frozen=True)
class CaseSpec:
    group: str
    generators: Tuple[str, ...] = ()
    rho: Union[str, Tuple[float, ...]] = "random"
    trials: int = DEFAULT_TRIALS
    tolerance: float = field(default_factory=get_tolerance)
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(str(g) for g in self.generators))
        if isinstance(self.rho, str):
            if self.rho not in RHO_CHOICES:
                raise SpecFormatError(f"rho must be one of {RHO_CHOICES} or explicit values, got {self.rho!r}")
        else:
            object.__setattr__(self, "rho", tuple(float(v) for v in self.rho))
        if not self.tolerance > 0:
            raise SpecFormatError(f"tolerance must be positive, got {self.tolerance}")
        if int(self.trials) < 1:
            raise SpecFormatError(f"trials must be at least 1, got {self.trials}")

    @property
    def key(self) -> str:
        return f"{self.group}|{';'.join(self.generators)}"


@dataclass
class CheckResult:
    check_id: str
    status: str
    max_error: float
    threshold: float
    witness: Optional[Dict[str, Any]] = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "id": self.check_id,
            "status": self.status,
            "max_error": self.max_error if np.isfinite(self.max_error) else str(self.max_error),
            "threshold": self.threshold,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if timings:
            out["elapsed"] = round(self.elapsed, 6)
        return out


@dataclass
class CaseResult:
    group: str
    subgroup: str
    generators: List[str]
    is_normal: bool
    has_identity: bool
    has_right_identity: bool
    has_left_identity_L1: bool
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks)

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        return {
            "group": self.group,
            "subgroup": self.subgroup,
            "generators": list(self.generators),
            "is_normal": self.is_normal,
            "has_identity": self.has_identity,
            "has_right_identity": self.has_right_identity,
            "has_left_identity_L1": self.has_left_identity_L1,
            "checks": [r.to_dict(timings) for r in self.checks],
        }


class Outcome:
    """Largest error a check has seen, with the inputs that produced it."""

    def __init__(self):
        self.error = 0.0
        self.inputs: Optional[Dict[str, Any]] = None

    def record(self, error: float, **inputs) -> None:
        error = float(error)
        if not np.isfinite(error):
            error = float("inf")
        if error > self.error:
            self.error = error
            self.inputs = inputs

    def witness(self) -> Optional[Dict[str, Any]]:
        if self.inputs is None:
            return None
        return {k: _payload(v) for k, v in sorted(self.inputs.items())}


def _payload(value):
    if isinstance(value, (MeasureG, MeasureQ)):
        return measure_to_dict(value)
    if isinstance(value, QuotientFunction):
        return function_to_dict(value)
    if isinstance(value, np.ndarray):
        arr = value.astype(np.complex128).reshape(-1)
        return {"re": arr.real.tolist(), "im": arr.imag.tolist()}
    if isinstance(value, (np.generic,)):
        return value.item()
    return value


def _values(x) -> np.ndarray:
    if isinstance(x, (MeasureG, MeasureQ)):
        return x.weights
    if isinstance(x, QuotientFunction):
        return x.values
    return np.asarray(x, dtype=np.complex128)


def absolute(a, b) -> float:
    """max |a − b| per component."""
    a, b = _values(a), _values(b)
    return float(np.max(np.abs(a - b), initial=0.0))


def rel(a, b) -> float:
    """max |a − b| / max(1, max |b|)."""
    a, b = _values(a), _values(b)
    scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
    return float(np.max(np.abs(a - b), initial=0.0)) / scale


def rel_scalar(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


# -------------------------
# Case context
# -------------------------
class CaseContext:
    """Everything one case's checks share: the group, cosets, algebra and rho system."""

    def __init__(self, spec: CaseSpec):
        self.spec = spec
        self.group = resolve_group(spec.group)
        self.subgroup = resolve_subgroup(self.group, spec.generators)
        self.space = coset_space(self.subgroup)
        self.ctx = AlgebraContext(self.space)
        self.embed = self.ctx.with_method(ConvolutionMethod.EMBED)
        self.is_normal = self.subgroup.is_normal()
        self.tol = float(spec.tolerance)
        self.exact_tol = min(EXACT_TOLERANCE, self.tol)
        self.trials = int(spec.trials)
        self.sys = self._rho_system()

    def _rho_system(self) -> RhoSystem:
        if self.spec.rho == "ones":
            return rho_system(self.space)
        if self.spec.rho == "random":
            return random_rho_system(self.space, self.rng("rho"))
        return rho_system(self.space, self.spec.rho)

    def rng(self, label: str) -> np.random.Generator:
        return rng_for(self.spec.seed, self.spec.key, label)

    def element(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.group.order))

    def name(self, g: int) -> str:
        return self.group.names[g]

    def random_f(self, rng: np.random.Generator) -> np.ndarray:
        n = self.group.order
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)

    @cached_property
    def identity(self):
        return identity_report(self.ctx, self.tol)

    @cached_property
    def l1_identity(self):
        return left_identity_search_L1(self.sys, self.tol)

    @cached_property
    def involution(self):
        return involution_check(self.ctx, self.rng("involution"), self.trials, self.tol)


@dataclass(frozen=True)
class CheckDef:
    check_id: str
    fn: Callable[[CaseContext], Outcome]
    exact: bool


CHECKS: Dict[str, CheckDef] = {}


def check(check_id: str, exact: bool = False):
    def register(fn):
        CHECKS[check_id] = CheckDef(check_id, fn, exact)
        return fn
    return register


def check_ids() -> List[str]:
    return list(CHECKS)


# -------------------------
# Groups and cosets
# -------------------------
@check("group-table-valid", exact=True)
def _group_table_valid(case: CaseContext) -> Outcome:
    o = Outcome()
    G = case.group
    try:
        build_group(G.table, G.names, name=G.name)
    except HalgError as e:
        o.record(1.0, error=str(e))
    bad = np.flatnonzero(G.table[np.arange(G.order), G.inverse] != G.identity)
    if bad.size:
        o.record(1.0, element=case.name(int(bad[0])))
    return o


@check("group-action-laws", exact=True)
def _group_action_laws(case: CaseContext) -> Outcome:
    o = Outcome()
    G, space = case.group, case.space
    A = space.action_table()
    if not np.array_equal(A[G.identity], np.arange(space.count)):
        o.record(1.0, law="e·c = c")
    composed = A[np.arange(G.order)[:, None, None], A[None, :, :]]   # x·(y·c)
    bad = np.argwhere(composed != A[G.table])                          # vs (xy)·c
    if bad.size:
        x, y, c = (int(v) for v in bad[0])
        o.record(1.0, x=case.name(x), y=case.name(y), coset=space.coset_name(c))
    return o


@check("coset-partition", exact=True)
def _coset_partition(case: CaseContext) -> Outcome:
    o = Outcome()
    G, H, space = case.group, case.subgroup, case.space
    counts = np.bincount(space.coset_of, minlength=space.count)
    if not np.all(counts == H.size):
        o.record(1.0, coset_sizes=counts.tolist())
    if not np.all(space.coset_of[G.table[:, H.members]] == space.coset_of[:, None]):
        o.record(1.0, law="q(g·h) = q(g)")
    if not np.array_equal(space.coset_of[space.rep], np.arange(space.count)):
        o.record(1.0, law="q(rep[c]) = c")
    spanned = np.sort(G.table[space.rep[:, None], H.members[None, :]], axis=1)
    if not np.array_equal(spanned, np.sort(space.members, axis=1)):
        o.record(1.0, law="members of c = rep[c]·H")
    return o


@check("normality-bruteforce", exact=True)
def _normality_bruteforce(case: CaseContext) -> Outcome:
    o = Outcome()
    G, H = case.group, case.subgroup
    left = np.sort(G.table[:, H.members], axis=1)                                  # gH
    right = np.sort(G.table[H.members[None, :], np.arange(G.order)[:, None]], axis=1)  # Hg
    differs = np.flatnonzero((left != right).any(axis=1))
    brute = differs.size == 0
    if brute != case.is_normal:
        o.record(1.0, witness=case.name(int(differs[0])) if differs.size else None, is_normal=case.is_normal)
    return o


# -------------------------
# Measures on G and G/H
# -------------------------
@check("project-section", exact=True)
def _project_section(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("project-section")
    for _ in range(case.trials):
        nu = random_Q(case.space, rng)
        o.record(absolute(project(case.space, section(nu)), nu), nu=nu)
    return o


@check("section-isometry", exact=True)
def _section_isometry(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("section-isometry")
    for _ in range(case.trials):
        nu = random_Q(case.space, rng)
        m = section(nu)
        o.record(abs(tv_norm(m) - tv_norm(nu)), nu=nu)
        o.record(invariance_defect(case.space, m), nu=nu)
    return o


@check("section-min-norm")
def _section_min_norm(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("section-min-norm")
    for _ in range(case.trials):
        m = random_G(case.group, rng)
        nu = project(case.space, m)
        o.record(max(0.0, tv_norm(nu) - tv_norm(m)), m=m)
        o.record(max(0.0, tv_norm(section(nu)) - tv_norm(m)), m=m)
    return o


@check("invariance-equivalence", exact=True)
def _invariance_equivalence(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("invariance-equivalence")
    space = case.space
    for _ in range(case.trials):
        invariant = section(random_Q(space, rng))
        generic = random_G(case.group, rng)
        if not is_right_H_invariant(space, invariant, case.tol):
            o.record(1.0, m=invariant)
        for m in (invariant, generic):
            predicate = is_right_H_invariant(space, m, case.tol)
            fixed = rel(canonical_projection(space, m), m) <= case.tol
            if predicate != fixed:
                o.record(1.0, m=m)
    return o


@check("invariant-left-ideal")
def _invariant_left_ideal(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("invariant-left-ideal")
    space = case.space
    for _ in range(case.trials):
        m = random_G(case.group, rng)
        nu, omega = random_Q(space, rng), random_Q(space, rng)
        for prod in (convolve_G(m, section(nu)), convolve_G(section(nu), section(omega))):
            scale = max(1.0, float(np.max(np.abs(prod.weights))))
            o.record(invariance_defect(space, prod) / scale, m=m, nu=nu, omega=omega)
    return o


@check("absolute-continuity", exact=True)
def _absolute_continuity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("absolute-continuity")
    G, space = case.group, case.space
    for _ in range(case.trials):
        m2 = random_G(G, rng, support=0.5)
        m1 = MeasureG(G, m2.weights * (rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order)))
        if not is_absolutely_continuous(m1, m2, case.tol):
            o.record(1.0, m1=m1, m2=m2)
        if not is_absolutely_continuous(project(space, m1), project(space, m2), case.tol):
            o.record(1.0, m1=m1, m2=m2)
    return o


@check("module-action-compatibility")
def _module_action_compatibility(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("module-action-compatibility")
    space = case.space
    for _ in range(case.trials):
        m1, m2 = random_G(case.group, rng), random_G(case.group, rng)
        lhs = project(space, convolve_G(m1, m2))
        rhs = module_action(space, m1, project(space, m2))
        o.record(rel(lhs, rhs), m1=m1, m2=m2)
    return o


@check("module-associativity")
def _module_associativity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("module-associativity")
    space = case.space
    for _ in range(case.trials):
        m1, m2 = random_G(case.group, rng), random_G(case.group, rng)
        nu = random_Q(space, rng)
        lhs = module_action(space, convolve_G(m1, m2), nu)
        rhs = module_action(space, m1, module_action(space, m2, nu))
        o.record(rel(lhs, rhs), m1=m1, m2=m2, nu=nu)
    return o


@check("dirac-projection", exact=True)
def _dirac_projection(case: CaseContext) -> Outcome:
    o = Outcome()
    for x in range(case.group.order):
        o.record(rel(project(case.space, dirac_G(case.group, x)), dirac_coset(case.space, x)), x=case.name(x))
    return o


@check("group-convolution-associativity")
def _group_convolution_associativity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("group-convolution-associativity")
    for _ in range(case.trials):
        a, b, c = (random_G(case.group, rng) for _ in range(3))
        o.record(absolute(convolve_G(convolve_G(a, b), c), convolve_G(a, convolve_G(b, c))), a=a, b=b, c=c)
    return o


# -------------------------
# The algebra M(G/H)
# -------------------------
@check("convolution-dual-path")
def _convolution_dual_path(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("convolution-dual-path")
    for _ in range(case.trials):
        nu, omega = random_Q(case.space, rng), random_Q(case.space, rng)
        o.record(rel(convolve_Q(case.ctx, nu, omega), convolve_Q(case.embed, nu, omega)), nu=nu, omega=omega)
    return o


@check("section-homomorphism")
def _section_homomorphism(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("section-homomorphism")
    for _ in range(case.trials):
        nu, omega = random_Q(case.space, rng), random_Q(case.space, rng)
        lhs = section(convolve_Q(case.ctx, nu, omega))
        o.record(rel(lhs, convolve_G(section(nu), section(omega))), nu=nu, omega=omega)
    return o


@check("quotient-associativity")
def _quotient_associativity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("quotient-associativity")
    ctx = case.ctx
    for _ in range(case.trials):
        a, b, c = (random_Q(case.space, rng) for _ in range(3))
        lhs = convolve_Q(ctx, convolve_Q(ctx, a, b), c)
        rhs = convolve_Q(ctx, a, convolve_Q(ctx, b, c))
        o.record(rel(lhs, rhs), a=a, b=b, c=c)
    return o


@check("quotient-submultiplicative")
def _quotient_submultiplicative(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("quotient-submultiplicative")
    for _ in range(case.trials):
        nu, omega = random_Q(case.space, rng), random_Q(case.space, rng)
        excess = tv_norm(convolve_Q(case.ctx, nu, omega)) - tv_norm(nu) * tv_norm(omega)
        o.record(max(0.0, excess), nu=nu, omega=omega)
    return o


@check("right-identity", exact=True)
def _right_identity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("right-identity")
    e = dirac_coset(case.space, case.group.identity)
    for _ in range(case.trials):
        nu = random_Q(case.space, rng)
        for ctx in (case.ctx, case.embed):
            o.record(rel(convolve_Q(ctx, nu, e), nu), nu=nu, method=ctx.method.value)
    return o


@check("dirac-convolution-formula")
def _dirac_convolution_formula(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("dirac-convolution-formula")
    space = case.space
    for a in range(space.count):
        for b in range(space.count):
            # any members of the two cosets give the same measure
            x = int(space.members[a, rng.integers(space.h_size)])
            y = int(space.members[b, rng.integers(space.h_size)])
            d = dirac_convolve(case.ctx, x, y)
            where = {"x": case.name(x), "y": case.name(y)}
            o.record(rel(d, convolve_Q(case.ctx, dirac_Q(space, a), dirac_Q(space, b))), **where)
            o.record(rel(d, convolve_Q(case.embed, dirac_Q(space, a), dirac_Q(space, b))), **where)
            o.record(abs(complex(np.sum(d.weights)) - 1.0), **where)
            o.record(max(0.0, -float(np.min(d.weights.real))), **where)
    return o


@check("identity-iff-normal", exact=True)
def _identity_iff_normal(case: CaseContext) -> Outcome:
    o = Outcome()
    report = case.identity
    if report.has_identity != case.is_normal:
        o.record(1.0, residual=report.residual, is_normal=case.is_normal)
    if not report.has_right_identity:
        o.record(1.0, right_identity_residual=report.right_identity_residual)
    return o


@check("left-identity-defect", exact=True)
def _left_identity_defect(case: CaseContext) -> Outcome:
    o = Outcome()
    report = case.identity
    if case.is_normal:
        failed = report.left_identity_defect > case.tol
    else:
        failed = report.left_identity_defect <= LEFT_DEFECT_GAP
    if failed:
        o.record(1.0, defect=report.left_identity_defect, witness=report.defect_witness, is_normal=case.is_normal)
    return o


@check("involution")
def _involution(case: CaseContext) -> Outcome:
    o = Outcome()
    report = case.involution
    if case.is_normal:
        o.record(report.max_error, **report.errors)
        return o
    if not report.verified:
        o.record(1.0, obstruction=report.obstruction, residual=report.identity_residual)
    try:
        star(case.ctx, dirac_Q(case.space, 0))
        o.record(1.0, law="star must refuse a non-normal subgroup")
    except NotNormal:
        pass
    return o


# -------------------------
# Rho systems and L¹(G/H)
# -------------------------
@check("weil-formula", exact=True)
def _weil_formula(case: CaseContext) -> Outcome:
    o = Outcome()
    scale = max(1.0, float(np.max(case.sys.rho)))
    o.record(weil_defect(case.sys) / scale, rho=case.sys.rho_on_cosets)
    return o


@check("integral-identity")
def _integral_identity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("integral-identity")
    for _ in range(case.trials):
        f = case.random_f(rng)
        lhs = integral(case.sys, T_rho(case.sys, f))
        scale = max(1.0, float(np.sum(np.abs(f))))
        o.record(abs(lhs - complex(np.sum(f))) / scale, f=f)
    return o


@check("norm-infimum", exact=True)
def _norm_infimum(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("norm-infimum")
    sys_ = case.sys
    for _ in range(case.trials):
        phi = random_function(case.space, rng)
        lifted = lift_rho(sys_, phi)
        o.record(rel(T_rho(sys_, lifted), phi), phi=phi)
        o.record(rel_scalar(float(np.sum(np.abs(lifted))), sys_.l1_norm(phi)), phi=phi)
        f = case.random_f(rng)
        norm_f = float(np.sum(np.abs(f)))
        o.record(max(0.0, sys_.l1_norm(T_rho(sys_, f)) - norm_f) / max(1.0, norm_f), f=f)
    return o


@check("invariant-measure", exact=True)
def _invariant_measure(case: CaseContext) -> Outcome:
    o = Outcome()
    G, space = case.group, case.space
    flat = rho_system(space)
    o.record(rel(project(space, counting(G)).weights, flat.mu))
    o.record(rel(project(space, density(G, case.sys.rho)).weights, case.sys.mu), rho=case.sys.rho_on_cosets)
    return o


@check("density-projection")
def _density_projection(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("density-projection")
    for _ in range(case.trials):
        f = case.random_f(rng)
        lhs = project(case.space, density(case.group, f))
        o.record(rel(lhs, case.sys.mu_measure(T_rho(case.sys, f))), f=f)
    return o


@check("section-of-density", exact=True)
def _section_of_density(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("section-of-density")
    for _ in range(case.trials):
        phi = random_function(case.space, rng)
        o.record(rel(section(case.sys.mu_measure(phi)).weights, lift_rho(case.sys, phi)), phi=phi)
    return o


@check("left-translation", exact=True)
def _left_translation(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("left-translation")
    G, sys_ = case.group, case.sys
    for _ in range(case.trials):
        x, y = case.element(rng), case.element(rng)
        phi = random_function(case.space, rng)
        where = {"x": case.name(x), "y": case.name(y), "phi": phi}
        moved = translate_left(sys_, x, phi)
        o.record(rel(translate_left(sys_, x, translate_left(sys_, y, phi)), translate_left(sys_, G.mul(x, y), phi)), **where)
        o.record(rel_scalar(sys_.l1_norm(moved), sys_.l1_norm(phi)), **where)
        shifted = lift_rho(sys_, phi)[G.table[G.inverse[x]]]
        o.record(rel(T_rho(sys_, shifted), moved), **where)
        o.record(rel(translate_left(sys_, G.identity, phi), phi), **where)
    return o


@check("right-translation-adjoint")
def _right_translation_adjoint(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("right-translation-adjoint")
    G, sys_ = case.group, case.sys
    for _ in range(case.trials):
        x = case.element(rng)
        phi, psi = random_function(case.space, rng), random_function(case.space, rng)
        where = {"x": case.name(x), "phi": phi, "psi": psi}
        lhs = sys_.pairing(translate_right(sys_, x, phi, TranslationMode.L1), psi)
        rhs = sys_.pairing(phi, translate_right(sys_, G.inv(x), psi, TranslationMode.LINF))
        o.record(rel_scalar(lhs, rhs), **where)
        o.record(rel(translate_right(sys_, x, phi, TranslationMode.LINF), right_translate_fn(case.space, x, phi)), **where)
        for mode in TranslationMode:
            o.record(rel(translate_right(sys_, G.identity, phi, mode), phi), **where)
    return o


@check("quasi-invariance", exact=True)
def _quasi_invariance(case: CaseContext) -> Outcome:
    o = Outcome()
    scale = max(1.0, float(np.max(case.sys.mu)))
    o.record(quasi_invariance_defect(case.sys) / scale, rho=case.sys.rho_on_cosets)
    return o


@check("t-infinity")
def _t_infinity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("t-infinity")
    space = case.space
    for _ in range(case.trials):
        f = case.random_f(rng)
        averaged = T_infinity(space, f)
        o.record(max(0.0, averaged.sup_norm() - float(np.max(np.abs(f)))), f=f)
        invariant = random_function(space, rng).values[space.coset_of]
        o.record(rel(T_infinity(space, invariant).values[space.coset_of], invariant), f=invariant)
        nu = random_Q(space, rng)
        lhs = complex(np.sum(f * section(nu).weights))
        rhs = complex(np.sum(averaged.values * nu.weights))
        o.record(rel_scalar(lhs, rhs), f=f, nu=nu)
    return o


@check("dirac-pairing")
def _dirac_pairing(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("dirac-pairing")
    space, G = case.space, case.group
    phi = random_function(space, rng)
    xs = [int(space.members[c, rng.integers(space.h_size)]) for c in range(space.count)]
    lefts = [left_translate_fn(space, x, phi) for x in xs]
    rights = [right_translate_fn(space, y, phi) for y in xs]
    for a, x in enumerate(xs):
        for b, y in enumerate(xs):
            value = complex(np.sum(dirac_convolve(case.ctx, x, y).weights * phi.values))
            where = {"x": case.name(x), "y": case.name(y), "phi": phi}
            o.record(rel_scalar(lefts[a].values[b], value), **where)
            o.record(rel_scalar(rights[b].values[a], value), **where)
            if case.is_normal:
                o.record(rel_scalar(lefts[a].values[b], phi.values[space.q(G.mul(x, y))]), **where)
    return o


@check("l1-convolution")
def _l1_convolution(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("l1-convolution")
    sys_ = case.sys
    for _ in range(case.trials):
        phi, psi, chi = (random_function(case.space, rng) for _ in range(3))
        where = {"phi": phi, "psi": psi, "chi": chi}
        prod = convolve_L1(sys_, phi, psi)
        o.record(rel(sys_.mu_measure(prod), convolve_Q(case.ctx, sys_.mu_measure(phi), sys_.mu_measure(psi))), **where)
        o.record(rel(convolve_L1_vector(sys_, phi, psi), prod), **where)
        o.record(rel(convolve_L1(sys_, prod, chi), convolve_L1(sys_, phi, convolve_L1(sys_, psi, chi))), **where)
        bound = sys_.l1_norm(phi) * sys_.l1_norm(psi)
        o.record(max(0.0, sys_.l1_norm(prod) - bound) / max(1.0, bound), **where)
    return o


@check("l1-group-ideal")
def _l1_group_ideal(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("l1-group-ideal")
    G, sys_ = case.group, case.sys
    for _ in range(case.trials):
        phi, psi = random_function(case.space, rng), random_function(case.space, rng)
        f = case.random_f(rng)
        where = {"phi": phi, "psi": psi, "f": f}
        lifted = convolve_functions(G, lift_rho(sys_, phi), lift_rho(sys_, psi))
        o.record(rel(lift_rho(sys_, convolve_L1(sys_, phi, psi)), lifted), **where)
        left = MeasureG(G, convolve_functions(G, f, lift_rho(sys_, psi)))
        o.record(invariance_defect(case.space, left) / max(1.0, float(np.max(np.abs(left.weights)))), **where)
    return o


@check("ideal-action-right")
def _ideal_action_right(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("ideal-action-right")
    sys_ = case.sys
    e = dirac_coset(case.space, case.group.identity)
    for _ in range(case.trials):
        phi, nu = random_function(case.space, rng), random_Q(case.space, rng)
        lhs = sys_.mu_measure(ideal_action_right(sys_, phi, nu))
        o.record(rel(lhs, convolve_Q(case.ctx, sys_.mu_measure(phi), nu)), phi=phi, nu=nu)
        o.record(rel(ideal_action_right(sys_, phi, e), phi), phi=phi)
    return o


@check("ideal-action-left")
def _ideal_action_left(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("ideal-action-left")
    sys_ = case.sys
    for _ in range(case.trials):
        phi, nu = random_function(case.space, rng), random_Q(case.space, rng)
        lhs = sys_.mu_measure(ideal_action_left(sys_, nu, phi))
        o.record(rel(lhs, convolve_Q(case.ctx, nu, sys_.mu_measure(phi))), phi=phi, nu=nu)
    return o


@check("l1-left-identity-iff-normal")
def _l1_left_identity(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("l1-left-identity-iff-normal")
    report = case.l1_identity
    if report.has_left_identity != case.is_normal:
        o.record(1.0, residual=report.residual, is_normal=case.is_normal)
        return o
    if report.identity is not None:
        space, sys_ = case.space, case.sys
        e = space.q(case.group.identity)
        expected = np.zeros(space.count, dtype=np.complex128)
        expected[e] = 1.0 / sys_.mu[e]
        o.record(rel(report.identity, expected), eta=report.identity)
        phi = random_function(space, rng)
        o.record(rel(convolve_L1(sys_, report.identity, phi), phi), eta=report.identity, phi=phi)
    return o


@check("l1-involution")
def _l1_involution(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("l1-involution")
    sys_ = case.sys
    if not case.is_normal:
        try:
            l1_star(sys_, random_function(case.space, rng))
            o.record(1.0, law="l1_star must refuse a non-normal subgroup")
        except NotNormal:
            pass
        if case.l1_identity.has_left_identity:
            o.record(1.0, residual=case.l1_identity.residual)
        return o
    for _ in range(case.trials):
        phi, psi = random_function(case.space, rng), random_function(case.space, rng)
        where = {"phi": phi, "psi": psi}
        o.record(rel(sys_.mu_measure(l1_star(sys_, phi)), star(case.ctx, sys_.mu_measure(phi))), **where)
        lhs = l1_star(sys_, convolve_L1(sys_, phi, psi))
        o.record(rel(lhs, convolve_L1(sys_, l1_star(sys_, psi), l1_star(sys_, phi))), **where)
        o.record(rel(l1_star(sys_, l1_star(sys_, phi)), phi), **where)
        o.record(rel_scalar(sys_.l1_norm(l1_star(sys_, phi)), sys_.l1_norm(phi)), **where)
    return o


# -------------------------
# Representatives
# -------------------------
@check("representative-independence", exact=True)
def _representative_independence(case: CaseContext) -> Outcome:
    o, rng = Outcome(), case.rng("representative-independence")
    space, sys_ = case.space, case.sys
    for _ in range(case.trials):
        other = space.random_representatives(rng)
        ctx2 = AlgebraContext(other)
        sys2 = sys_.with_space(other)
        nu, omega = random_Q(space, rng), random_Q(space, rng)
        phi, psi = random_function(space, rng), random_function(space, rng)
        f = case.random_f(rng)
        x = case.element(rng)
        where = {"reps": [case.name(int(r)) for r in other.rep], "nu": nu, "omega": omega,
                 "phi": phi, "psi": psi, "x": case.name(x)}
        pairs = [
            (convolve_Q(case.ctx, nu, omega), convolve_Q(ctx2, nu, omega)),
            (convolve_L1(sys_, phi, psi), convolve_L1(sys2, phi, psi)),
            (ideal_action_right(sys_, phi, nu), ideal_action_right(sys2, phi, nu)),
            (ideal_action_left(sys_, nu, phi), ideal_action_left(sys2, nu, phi)),
            (left_translate_fn(space, x, phi), left_translate_fn(other, x, phi)),
            (right_translate_fn(space, x, phi), right_translate_fn(other, x, phi)),
            (T_rho(sys_, f), T_rho(sys2, f)),
            (T_infinity(space, f), T_infinity(other, f)),
            (translate_left(sys_, x, phi), translate_left(sys2, x, phi)),
            (translate_right(sys_, x, phi, TranslationMode.L1), translate_right(sys2, x, phi, TranslationMode.L1)),
            (translate_right(sys_, x, phi, TranslationMode.LINF), translate_right(sys2, x, phi, TranslationMode.LINF)),
        ]
        for canonical, moved in pairs:
            o.record(rel(moved, canonical), **where)
    return o


# -------------------------
# Running
# -------------------------
def _select(checks: Optional[Sequence[str]]) -> List[CheckDef]:
    if not checks:
        return list(CHECKS.values())
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise UnknownCheck(f"unknown check id {unknown[0]!r}; known: {', '.join(CHECKS)}")
    wanted = set(checks)
    return [CHECKS[c] for c in CHECKS if c in wanted]


def evaluate_case(spec: CaseSpec, checks: Optional[Sequence[str]] = None) -> CaseResult:
    selected = _select(checks)
    case = CaseContext(spec)
    label = f"{case.group.name}/{case.subgroup.label()}"
    log.info("case %s: %d checks", label, len(selected))
    results: List[CheckResult] = []
    for item in selected:
        threshold = case.exact_tol if item.exact else case.tol
        started = time.perf_counter()
        outcome = item.fn(case)
        elapsed = time.perf_counter() - started
        passed = outcome.error <= threshold
        if not passed:
            log.warning("%s: %s failed with error %.3g (threshold %.1g)", label, item.check_id, outcome.error, threshold)
        results.append(CheckResult(
            check_id=item.check_id,
            status=PASS if passed else FAIL,
            max_error=outcome.error,
            threshold=threshold,
            witness=None if passed else outcome.witness(),
            elapsed=elapsed,
        ))
    return CaseResult(
        group=case.group.name,
        subgroup=case.subgroup.label(),
        generators=list(spec.generators),
        is_normal=case.is_normal,
        has_identity=case.identity.has_identity,
        has_right_identity=case.identity.has_right_identity,
        has_left_identity_L1=case.l1_identity.has_left_identity,
        checks=results,
    )


def run_case(spec: CaseSpec, checks: Optional[Sequence[str]] = None) -> List[CheckResult]:
    return evaluate_case(spec, checks).checks


def build_report(cases: Sequence[CaseResult], seed: int, tolerance: float, timings: bool = False) -> Dict[str, Any]:
    n_pass = sum(r.passed for c in cases for r in c.checks)
    n_fail = sum(not r.passed for c in cases for r in c.checks)
    agree = all(c.has_identity == c.has_left_identity_L1 == c.is_normal and c.has_right_identity for c in cases)
    return {
        "version": REPORT_VERSION,
        "seed": seed,
        "tolerance": tolerance,
        "cases": [c.to_dict(timings) for c in cases],
        "summary": {
            "pass": n_pass,
            "fail": n_fail,
            "cases": len(cases),
            "failed_cases": sum(not c.passed for c in cases),
            "normality_agreement": agree,
        },
    }


def verify_cases(specs: Sequence[CaseSpec], checks: Optional[Sequence[str]] = None, workers: Optional[int] = None,
                 progress: bool = False) -> List[CaseResult]:
    """Evaluate cases in order; with workers > 1 the cases run in a process pool."""
    _select(checks)
    workers = WORKERS if workers is None else max(1, int(workers))
    bar = tqdm(total=len(specs), desc="verify", unit="case", file=sys.stderr, disable=None if progress else True)
    results: List[CaseResult] = []
    try:
        if workers > 1 and len(specs) > 1:
            with Pool(processes=workers) as pool:
                for result in pool.imap(partial(evaluate_case, checks=checks), specs):
                    results.append(result)
                    bar.update(1)
        else:
            for spec in specs:
                results.append(evaluate_case(spec, checks))
                bar.update(1)
    finally:
        bar.close()
    return results


def catalog_specs(tolerance: Optional[float] = None, seed: Optional[int] = None,
                  trials: Optional[int] = None, rho: Optional[str] = None) -> List[CaseSpec]:
    tolerance = get_tolerance() if tolerance is None else tolerance
    seed = DEFAULT_SEED if seed is None else seed
    trials = DEFAULT_TRIALS if trials is None else trials
    rho = PRESETS.get("rho", "random") if rho is None else rho
    return [
        CaseSpec(c["group"], tuple(c["generators"]), rho=rho, trials=trials, tolerance=tolerance, seed=seed)
        for c in catalog_cases()
    ]


def run_catalog(tolerance: Optional[float] = None, seed: Optional[int] = None, trials: Optional[int] = None,
                workers: Optional[int] = None, checks: Optional[Sequence[str]] = None,
                progress: bool = False, timings: bool = False) -> Dict[str, Any]:
    specs = catalog_specs(tolerance, seed, trials)
    cases = verify_cases(specs, checks=checks, workers=workers, progress=progress)
    report = build_report(cases, specs[0].seed, specs[0].tolerance, timings)
    log.info("catalog: %d pass, %d fail", report["summary"]["pass"], report["summary"]["fail"])
    return report
