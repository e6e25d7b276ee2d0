import dataclasses

import numpy as np
import pytest

from halg import verifier
from halg.errors import SpecFormatError, SystemMismatch, UnknownCheck
from halg.seeding import derive_seed, rng_for
from halg.verifier import (
    LEFT_DEFECT_GAP,
    CaseSpec,
    CheckDef,
    Outcome,
    absolute,
    build_report,
    catalog_specs,
    check_ids,
    evaluate_case,
    rel,
    rel_scalar,
    run_case,
    run_catalog,
    verify_cases,
)

TRIALS = 3


def _failing(case):
    o = Outcome()
    o.record(0.5, x=np.float64(2.0), label="forced")
    return o


@pytest.fixture
def failing_check(monkeypatch):
    monkeypatch.setitem(verifier.CHECKS, "always-fails", CheckDef("always-fails", _failing, exact=False))
    return "always-fails"


class TestSeeding:
    def test_derive_seed_is_stable(self):
        assert derive_seed(7, "a", "b") == derive_seed(7, "a", "b")
        assert derive_seed(7, "a", "b") != derive_seed(7, "ab")
        assert derive_seed(7, "a") != derive_seed(8, "a")
        assert 0 <= derive_seed(7) < 2 ** 64

    def test_streams_repeat(self):
        a = rng_for(7, "S3|(0 1)", "involution").standard_normal(5)
        b = rng_for(7, "S3|(0 1)", "involution").standard_normal(5)
        c = rng_for(7, "S3|(0 1)", "weil-formula").standard_normal(5)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestCaseSpec:
    def test_defaults(self):
        spec = CaseSpec("S3", ["(0 1)"])
        assert spec.generators == ("(0 1)",)
        assert spec.rho == "random"
        assert spec.key == "S3|(0 1)"

    def test_explicit_rho(self):
        assert CaseSpec("Z4", ("2",), rho=[1, 3]).rho == (1.0, 3.0)

    @pytest.mark.parametrize("kwargs", [{"rho": "bogus"}, {"tolerance": 0.0}, {"trials": 0}])
    def test_rejects(self, kwargs):
        with pytest.raises(SpecFormatError):
            CaseSpec("S3", **kwargs)

    def test_rho_length_checked_when_run(self):
        with pytest.raises(SystemMismatch):
            evaluate_case(CaseSpec("Z4", ("2",), rho=(1.0, 2.0, 3.0), trials=TRIALS))


def test_relative_errors():
    assert rel([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert rel([0.0], [4.0]) == pytest.approx(1.0)
    assert rel([1e-3], [0.0]) == pytest.approx(1e-3)
    assert rel_scalar(3.0, 2.0) == pytest.approx(0.5)
    assert absolute([0.0, 1.0], [4.0, 1.0]) == 4.0
    assert absolute([], []) == 0.0


def test_outcome_keeps_worst_inputs():
    o = Outcome()
    assert o.witness() is None
    o.record(0.1, a=1)
    o.record(0.3, a=2)
    o.record(0.2, a=3)
    o.record(float("nan"), a=4)
    assert o.error == float("inf")
    assert o.witness() == {"a": 4}


def test_check_ids_are_ordered_and_unique():
    ids = check_ids()
    assert len(ids) == 41
    assert len(set(ids)) == len(ids)
    assert ids[0] == "group-table-valid"
    assert ids[-1] == "representative-independence"
    assert ids.index("weil-formula") < ids.index("l1-convolution")


@pytest.mark.parametrize("group,gens,normal", [
    ("S3", ("(0 1 2)",), True),
    ("S3", ("(0 1)",), False),
    ("Z1", (), True),
    ("D4", ("(0 2)",), False),
    ("Q8", ("i",), True),
])
def test_cases_pass(group, gens, normal):
    result = evaluate_case(CaseSpec(group, gens, trials=TRIALS, tolerance=1e-9, seed=7))
    failed = [r.check_id for r in result.checks if not r.passed]
    assert failed == []
    assert result.is_normal is normal
    assert result.has_identity is normal
    assert result.has_left_identity_L1 is normal
    assert result.has_right_identity


def test_ones_rho():
    checks = run_case(CaseSpec("S4", ("(0 1 2 3)",), rho="ones", trials=TRIALS))
    assert all(r.passed for r in checks)
    assert all(r.witness is None for r in checks)


def test_check_selection_keeps_suite_order():
    checks = run_case(CaseSpec("S3", ("(0 1)",), trials=TRIALS), checks=["weil-formula", "involution"])
    assert [r.check_id for r in checks] == ["involution", "weil-formula"]
    with pytest.raises(UnknownCheck):
        run_case(CaseSpec("S3", ("(0 1)",)), checks=["no-such-check"])


def test_exact_checks_use_exact_threshold():
    checks = {r.check_id: r for r in run_case(CaseSpec("S3", ("(0 1)",), trials=TRIALS, tolerance=1e-6))}
    assert checks["weil-formula"].threshold == 1e-12
    assert checks["l1-convolution"].threshold == 1e-6


def test_failure_carries_witness(failing_check):
    result = evaluate_case(CaseSpec("Z2", ("1",), trials=TRIALS), checks=[failing_check])
    (only,) = result.checks
    assert only.status == "fail"
    assert only.max_error == 0.5
    assert only.witness == {"label": "forced", "x": 2.0}
    report = build_report([result], seed=7, tolerance=1e-9)
    assert report["summary"] == {
        "pass": 0, "fail": 1, "cases": 1, "failed_cases": 1, "normality_agreement": True,
    }


def test_report_is_deterministic():
    spec = CaseSpec("S3", ("(0 1)",), trials=TRIALS, seed=11)
    first = build_report([evaluate_case(spec)], 11, spec.tolerance)
    second = build_report([evaluate_case(spec)], 11, spec.tolerance)
    assert first == second
    assert "elapsed" not in first["cases"][0]["checks"][0]
    timed = build_report([evaluate_case(spec)], 11, spec.tolerance, timings=True)
    assert "elapsed" in timed["cases"][0]["checks"][0]


def test_worker_count_does_not_change_results():
    specs = [CaseSpec("S3", ("(0 1)",), trials=TRIALS), CaseSpec("D4", ("(0 2)",), trials=TRIALS)]
    serial = [c.to_dict() for c in verify_cases(specs, workers=1)]
    pooled = [c.to_dict() for c in verify_cases(specs, workers=2)]
    assert serial == pooled


def test_catalog_specs():
    specs = catalog_specs(tolerance=1e-9, seed=3, trials=2, rho="ones")
    assert len(specs) == 54
    assert all(s.rho == "ones" and s.seed == 3 and s.trials == 2 for s in specs)
    assert len({s.key for s in specs}) == len(specs)


def _with_left_defect(monkeypatch, defect):
    real = verifier.identity_report
    monkeypatch.setattr(verifier, "identity_report",
                        lambda ctx, tol: dataclasses.replace(real(ctx, tol), left_identity_defect=defect))


@pytest.mark.parametrize("group,gens,defect,status", [
    ("S3", ("(0 1)",), 1.0, "pass"),
    ("S3", ("(0 1)",), LEFT_DEFECT_GAP / 2, "fail"),
    ("S3", ("(0 1 2)",), 0.0, "pass"),
    ("S3", ("(0 1 2)",), 1e-6, "fail"),
])
def test_left_identity_defect_bounds(monkeypatch, group, gens, defect, status):
    _with_left_defect(monkeypatch, defect)
    (result,) = run_case(CaseSpec(group, gens, trials=TRIALS), checks=["left-identity-defect"])
    assert result.status == status


def _statuses(report):
    return {(c["group"], c["subgroup"], r["id"]): r["status"] for c in report["cases"] for r in c["checks"]}


@pytest.fixture(scope="module")
def catalog_report():
    return run_catalog(tolerance=1e-9, seed=7, trials=2)


class TestCatalogRun:
    def test_everything_passes(self, catalog_report):
        summary = catalog_report["summary"]
        assert summary["cases"] == 54
        assert summary["pass"] == 54 * len(check_ids())
        assert summary["fail"] == 0
        assert summary["normality_agreement"] is True

    def test_statuses_do_not_depend_on_seed(self, catalog_report):
        other = run_catalog(tolerance=1e-9, seed=123, trials=2)
        assert _statuses(other) == _statuses(catalog_report)

    def test_loose_tolerance_keeps_the_pass_set(self, catalog_report):
        loose = run_catalog(tolerance=1e-3, seed=7, trials=2)
        assert _statuses(loose) == _statuses(catalog_report)
