"""
halg/cli.py

Command-line surface:
  halg list-groups
  halg subgroups --group S4
  halg cosets    --group S3 --subgroup "(0 1)"
  halg analyze   --group S3 --subgroup "(0 1)" [--rho rho.json]
  halg convolve  --group Z4 --subgroup 2 --nu nu.json --omega omega.json [--method direct|embed] [--rho rho.json]
  halg verify    (--all | --group G --subgroup GENS) [--trials N] [--seed S] [--tol T] [--report FILE]

--group takes a catalog name or a group spec JSON file. Subgroup generators are element
names separated by ';' or ',' (cycle notation for permutation groups). JSON goes to
stdout (or --report); logs and progress go to stderr.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

import logging
from typing import Optional, Sequence

import click

from .catalog import list_groups, resolve_group, resolve_subgroup, split_generators
from .config import DEFAULT_SEED, DEFAULT_TRIALS, check_config, get_tolerance
from .errors import HalgError
from .group_core import all_subgroups, coset_space
from .io_json import (
    coset_names,
    dumps,
    function_to_dict,
    measure_to_dict,
    read_operand,
    read_rho,
    rho_to_dict,
    write_json,
)
from .lebesgue_quotient import (
    QuotientFunction,
    convolve_L1,
    ideal_action_left,
    ideal_action_right,
    left_identity_search_L1,
    rho_system,
)
from .log import get_logger, set_level
from .quotient_algebra import AlgebraContext, ConvolutionMethod, convolve_Q, identity_report, involution_check
from .seeding import rng_for
from .verifier import CaseSpec, RHO_CHOICES, build_report, catalog_specs, check_ids, verify_cases

log = get_logger("halg.cli")


class InputError(click.ClickException):
    exit_code = 2


class HalgGroup(click.Group):
    """Turns library errors into exit code 2 with the message on stderr."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except HalgError as e:
            raise InputError(f"{type(e).__name__}: {e}")


def _emit(obj) -> None:
    click.echo(dumps(obj), nl=False)


def _case(group_ref: str, generators: str):
    G = resolve_group(group_ref)
    H = resolve_subgroup(G, split_generators(generators))
    return G, H, coset_space(H)


def _rho(space, path: Optional[str]):
    return rho_system(space, None if path is None else read_rho(path, space))


def _cosets_payload(space):
    names = coset_names(space)
    return [
        {"coset": names[c], "representative": space.group.names[space.rep[c]],
         "members": [space.group.names[g] for g in space.members[c]]}
        for c in range(space.count)
    ]


group_option = click.option("--group", "group_ref", required=True, help="Catalog name (S3, Z6, ...) or group spec JSON file.")
subgroup_option = click.option("--subgroup", "generators", default="", show_default=False,
                               help="Generator names, separated by ';' or ','. Empty for the trivial subgroup.")


@click.group(cls=HalgGroup, context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", count=True, help="More logging (-v info, -vv debug).")
@click.option("-q", "--quiet", is_flag=True, help="Only errors on stderr; no progress bar.")
@click.pass_context
def cli(ctx, verbose: int, quiet: bool):
    """Measure algebras M(G/H) and L¹(G/H) on finite homogeneous spaces."""
    check_config()
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet
    if quiet:
        set_level(logging.ERROR)
    elif verbose:
        set_level(logging.DEBUG if verbose > 1 else logging.INFO)


@cli.command("list-groups")
def list_groups_cmd():
    """Built-in groups with their orders."""
    _emit(list_groups())


@cli.command("subgroups")
@group_option
def subgroups_cmd(group_ref: str):
    """Every subgroup of a group, smallest first."""
    G = resolve_group(group_ref)
    out = []
    for H in all_subgroups(G):
        out.append({
            "order": H.size,
            "index": G.order // H.size,
            "members": [G.names[m] for m in H.members],
            "is_normal": H.is_normal(),
        })
    _emit({"group": G.name, "order": G.order, "subgroups": out})


@cli.command("cosets")
@group_option
@subgroup_option
def cosets_cmd(group_ref: str, generators: str):
    """Left cosets of a subgroup and the action of G on them."""
    G, H, space = _case(group_ref, generators)
    names = coset_names(space)
    action = space.action_table()
    _emit({
        "group": G.name,
        "subgroup": H.label(),
        "is_normal": H.is_normal(),
        "cosets": _cosets_payload(space),
        "action": {G.names[x]: [names[c] for c in action[x]] for x in range(G.order)},
    })


@cli.command("analyze")
@group_option
@subgroup_option
@click.option("--rho", "rho_path", type=click.Path(exists=True, dir_okay=False), help="Rho file; default ρ ≡ 1.")
@click.option("--trials", type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None, help="Tolerance (default HALG_TOL or 1e-9).")
def analyze_cmd(group_ref: str, generators: str, rho_path: Optional[str], trials: int, seed: int, tol: Optional[float]):
    """Normality, identity search and involution report for one (G, H)."""
    tol = get_tolerance() if tol is None else tol
    G, H, space = _case(group_ref, generators)
    ctx = AlgebraContext(space)
    sys_ = _rho(space, rho_path)
    involution = involution_check(ctx, rng_for(seed, "analyze", G.name, H.label()), trials, tol)
    _emit({
        "group": G.name,
        "subgroup": H.label(),
        "order": G.order,
        "index": space.count,
        "is_normal": H.is_normal(),
        "tolerance": tol,
        "cosets": _cosets_payload(space),
        "identity": identity_report(ctx, tol).to_dict(),
        "involution": involution.to_dict(),
        "l1": {
            "rho": rho_to_dict(sys_)["rho"],
            "mu": [{"coset": n, "value": float(v)} for n, v in zip(coset_names(space), sys_.mu)],
            "left_identity": left_identity_search_L1(sys_, tol).to_dict(),
        },
    })


@cli.command("convolve")
@group_option
@subgroup_option
@click.option("--nu", "nu_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--omega", "omega_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice([m.value for m in ConvolutionMethod]), default=None,
              help="Evaluation path for two measures (default direct).")
@click.option("--rho", "rho_path", type=click.Path(exists=True, dir_okay=False), help="Rho file for function operands.")
def convolve_cmd(group_ref: str, generators: str, nu_path: str, omega_path: str, method: Optional[str],
                 rho_path: Optional[str]):
    """
    ν*ω on G/H. Measures ("kind": "Q") convolve in M(G/H); functions ("kind": "fn")
    convolve in L¹(G/H); a function with a measure uses the ideal actions. --method
    only applies to two measures.
    """
    _, _, space = _case(group_ref, generators)
    nu, omega = read_operand(nu_path, space), read_operand(omega_path, space)
    functions = (isinstance(nu, QuotientFunction), isinstance(omega, QuotientFunction))
    if functions == (False, False):
        ctx = AlgebraContext(space, ConvolutionMethod(method or "direct"))
        _emit(measure_to_dict(convolve_Q(ctx, nu, omega)))
        return
    if method is not None:
        raise click.UsageError("--method applies only when both operands are measures")
    sys_ = _rho(space, rho_path)
    if functions == (True, True):
        out = convolve_L1(sys_, nu, omega)
    elif functions[0]:
        out = ideal_action_right(sys_, nu, omega)
    else:
        out = ideal_action_left(sys_, nu, omega)
    _emit(function_to_dict(out))


@cli.command("verify")
@click.option("--all", "run_all", is_flag=True, help="Run the whole built-in catalog.")
@click.option("--group", "group_ref", default=None, help="Catalog name or group spec JSON file.")
@click.option("--subgroup", "generators", default="", help="Generator names, separated by ';' or ','.")
@click.option("--trials", type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None, help="Tolerance (default HALG_TOL or 1e-9).")
@click.option("--rho", "rho_choice", default="random", show_default=True,
              help="'random', 'ones', or a rho file (single case only).")
@click.option("--check", "checks", multiple=True, help="Run only this check id (repeatable).")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Process pool size (default HALG_WORKERS).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
@click.option("--timings", is_flag=True, help="Include per-check elapsed seconds (report no longer byte-stable).")
@click.option("--list-checks", is_flag=True, help="Print the check ids and exit.")
@click.pass_context
def verify_cmd(ctx, run_all: bool, group_ref: Optional[str], generators: str, trials: int, seed: int,
               tol: Optional[float], rho_choice: str, checks: Sequence[str], workers: Optional[int],
               report_path: Optional[str], timings: bool, list_checks: bool):
    """Run the property suite and emit a JSON report; exit 1 on any failure."""
    if list_checks:
        _emit(check_ids())
        return
    if run_all == (group_ref is not None):
        raise click.UsageError("give either --all or --group (with --subgroup)")
    tol = get_tolerance() if tol is None else tol

    if run_all:
        if rho_choice not in RHO_CHOICES:
            raise click.UsageError("--all takes --rho random or --rho ones")
        specs = catalog_specs(tol, seed, trials, rho_choice)
    else:
        rho = rho_choice
        if rho_choice not in RHO_CHOICES:
            _, _, space = _case(group_ref, generators)
            rho = tuple(read_rho(rho_choice, space))
        specs = [CaseSpec(group_ref, tuple(split_generators(generators)), rho=rho, trials=trials, tolerance=tol, seed=seed)]

    log.info("verifying %d case(s), seed=%d, tol=%g", len(specs), seed, tol)
    quiet = ctx.find_root().obj.get("quiet", False)
    cases = verify_cases(specs, checks=list(checks) or None, workers=workers, progress=run_all and not quiet)
    report = build_report(cases, seed, tol, timings)
    if report_path:
        write_json(report, report_path)
        if not quiet:
            summary = report["summary"]
            click.echo(f"{summary['pass']} passed, {summary['fail']} failed -> {report_path}", err=True)
    else:
        _emit(report)
    if report["summary"]["fail"]:
        ctx.exit(1)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="halg", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return rv if isinstance(rv, int) else 0
