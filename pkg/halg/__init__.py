"""
halg: measure algebras M(G/H) and function algebras L¹(G/H) on finite homogeneous spaces.

Usage:
    from halg import get_group, resolve_subgroup, coset_space, AlgebraContext, identity_report
    G = get_group("S3")
    space = coset_space(resolve_subgroup(G, ["(0 1)"]))
    identity_report(AlgebraContext(space)).has_identity    # False
"""

from .catalog import get_group, resolve_group, resolve_subgroup
from .errors import HalgError
from .group_core import CosetSpace, FiniteGroup, Subgroup, build_group, coset_space, group_from_permutations
from .lebesgue_quotient import QuotientFunction, RhoSystem, convolve_L1, rho_system
from .measure_space import MeasureG, MeasureQ, project, section
from .quotient_algebra import AlgebraContext, ConvolutionMethod, convolve_Q, identity_report

__version__ = "1.0.0"

__all__ = [
    "AlgebraContext",
    "ConvolutionMethod",
    "CosetSpace",
    "FiniteGroup",
    "HalgError",
    "MeasureG",
    "MeasureQ",
    "QuotientFunction",
    "RhoSystem",
    "Subgroup",
    "build_group",
    "convolve_L1",
    "convolve_Q",
    "coset_space",
    "get_group",
    "group_from_permutations",
    "identity_report",
    "project",
    "resolve_group",
    "resolve_subgroup",
    "rho_system",
    "section",
]
