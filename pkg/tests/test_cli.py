import json

import pytest
from click.testing import CliRunner

from halg import verifier
from halg.cli import cli, main
from halg.verifier import CheckDef, Outcome


@pytest.fixture
def runner():
    return CliRunner()


def _json(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_list_groups(runner):
    groups = _json(runner.invoke(cli, ["list-groups"]))
    assert {"name": "S3", "order": 6, "abelian": False} in groups


def test_subgroups(runner):
    out = _json(runner.invoke(cli, ["subgroups", "--group", "S3"]))
    assert out["order"] == 6
    assert len(out["subgroups"]) == 6
    assert sum(s["is_normal"] for s in out["subgroups"]) == 3


def test_cosets(runner):
    out = _json(runner.invoke(cli, ["cosets", "--group", "S3", "--subgroup", "(0 1)"]))
    assert out["subgroup"] == "<(0 1)>"
    assert [c["coset"] for c in out["cosets"]] == ["e", "(1 2)", "(0 1 2)"]
    assert out["cosets"][1]["members"] == ["(1 2)", "(0 2 1)"]
    assert out["action"]["e"] == ["e", "(1 2)", "(0 1 2)"]


def test_analyze_non_normal(runner):
    out = _json(runner.invoke(cli, ["analyze", "--group", "S3", "--subgroup", "(0 1)", "--trials", "5"]))
    assert out["is_normal"] is False
    assert out["index"] == 3
    assert out["identity"]["has_identity"] is False
    assert out["identity"]["has_right_identity"] is True
    assert out["involution"]["has_involution"] is False
    assert out["l1"]["left_identity"]["has_left_identity"] is False
    assert [m["value"] for m in out["l1"]["mu"]] == [2.0, 2.0, 2.0]


def test_analyze_normal_with_rho(runner, tmp_path):
    rho = _write(tmp_path / "rho.json", {"rho": [{"coset": "0", "value": 1.0}, {"coset": "1", "value": 3.0}]})
    out = _json(runner.invoke(cli, ["analyze", "--group", "Z4", "--subgroup", "2", "--rho", rho]))
    assert out["identity"]["has_identity"] is True
    assert out["identity"]["identity"] == [{"at": "0", "re": 1.0, "im": 0.0}]
    left = out["l1"]["left_identity"]
    assert left["has_left_identity"] is True
    assert left["identity"][0]["at"] == "0"
    assert left["identity"][0]["re"] == pytest.approx(0.5)


def test_convolve_measures(runner, tmp_path):
    nu = _write(tmp_path / "nu.json", {"kind": "Q", "entries": [{"at": "1", "re": 1}]})
    for method in ("direct", "embed"):
        out = _json(runner.invoke(cli, ["convolve", "--group", "Z4", "--subgroup", "2",
                                        "--nu", nu, "--omega", nu, "--method", method]))
        assert out == {"kind": "Q", "entries": [{"at": "0", "re": 1.0, "im": 0.0}]}


def test_convolve_functions_and_mixed(runner, tmp_path):
    fn = _write(tmp_path / "fn.json", {"kind": "fn", "entries": [{"at": "0", "re": 1}]})
    nu = _write(tmp_path / "nu.json", {"kind": "Q", "entries": [{"at": "1", "re": 1}]})
    out = _json(runner.invoke(cli, ["convolve", "--group", "Z4", "--subgroup", "2", "--nu", fn, "--omega", fn]))
    assert out == {"kind": "fn", "entries": [{"at": "0", "re": 2.0, "im": 0.0}]}
    for pair in ((fn, nu), (nu, fn)):
        out = _json(runner.invoke(cli, ["convolve", "--group", "Z4", "--subgroup", "2",
                                        "--nu", pair[0], "--omega", pair[1]]))
        assert out["kind"] == "fn"
        assert [e["at"] for e in out["entries"]] == ["1"]


def test_convolve_method_needs_two_measures(runner, tmp_path):
    fn = _write(tmp_path / "fn.json", {"kind": "fn", "entries": [{"at": "0", "re": 1}]})
    result = runner.invoke(cli, ["convolve", "--group", "Z4", "--subgroup", "2",
                                 "--nu", fn, "--omega", fn, "--method", "embed"])
    assert result.exit_code == 2
    assert "--method applies only" in result.output


def test_group_spec_file(runner, tmp_path):
    spec = _write(tmp_path / "z3.json", {"name": "Z3", "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]})
    out = _json(runner.invoke(cli, ["cosets", "--group", spec, "--subgroup", ""]))
    assert out["group"] == "Z3"
    assert out["subgroup"] == "{0}"
    assert len(out["cosets"]) == 3


@pytest.mark.parametrize("args,message", [
    (["cosets", "--group", "X9"], "UnknownGroup"),
    (["cosets", "--group", "S3", "--subgroup", "(0 5)"], "UnknownElement"),
    (["verify", "--group", "S3", "--check", "nope"], "UnknownCheck"),
    (["verify"], "either --all or --group"),
    (["verify", "--all", "--group", "S3"], "either --all or --group"),
])
def test_input_errors_exit_2(runner, args, message):
    result = runner.invoke(cli, args)
    assert result.exit_code == 2
    assert message in result.output


def test_malformed_tolerance_exits_2(runner, monkeypatch):
    monkeypatch.setenv("HALG_TOL", "abc")
    result = runner.invoke(cli, ["list-groups"])
    assert result.exit_code == 2
    assert "ConfigError" in result.output
    assert "HALG_TOL" in result.output


def test_invalid_table_exits_2(runner, tmp_path):
    spec = _write(tmp_path / "bad.json", {"table": [[0, 2, 1], [2, 1, 0], [1, 0, 2]]})
    result = runner.invoke(cli, ["subgroups", "--group", spec])
    assert result.exit_code == 2
    assert "NoIdentity" in result.output


def test_verify_single_case(runner):
    report = _json(runner.invoke(cli, ["verify", "--group", "S3", "--subgroup", "(0 1)", "--trials", "3"]))
    assert report["summary"]["fail"] == 0
    assert report["summary"]["cases"] == 1
    assert report["summary"]["normality_agreement"] is True
    case = report["cases"][0]
    assert case["is_normal"] is False and case["has_identity"] is False
    assert all("elapsed" not in c for c in case["checks"])


def test_verify_report_file_and_rho_file(runner, tmp_path):
    rho = _write(tmp_path / "rho.json", {"rho": [{"coset": "0", "value": 2.0}, {"coset": "1", "value": 0.5}]})
    target = tmp_path / "out" / "report.json"
    result = runner.invoke(cli, ["verify", "--group", "Z4", "--subgroup", "2", "--trials", "3",
                                 "--rho", rho, "--report", str(target), "--timings"])
    assert result.exit_code == 0, result.output
    report = json.loads(target.read_text())
    assert report["summary"]["fail"] == 0
    assert "elapsed" in report["cases"][0]["checks"][0]


def test_verify_all(runner):
    report = _json(runner.invoke(cli, ["-q", "verify", "--all", "--trials", "2", "--seed", "7"]))
    assert report["summary"]["cases"] == 54
    assert report["summary"]["fail"] == 0
    assert report["summary"]["normality_agreement"] is True


def test_verify_all_rejects_rho_file(runner):
    result = runner.invoke(cli, ["verify", "--all", "--rho", "rho.json"])
    assert result.exit_code == 2


def test_verify_list_checks(runner):
    ids = _json(runner.invoke(cli, ["verify", "--list-checks"]))
    assert ids[0] == "group-table-valid"
    assert "l1-involution" in ids


def test_verify_failure_exits_1(runner, monkeypatch):
    def broken(case):
        o = Outcome()
        o.record(1.0, reason="forced")
        return o

    monkeypatch.setitem(verifier.CHECKS, "always-fails", CheckDef("always-fails", broken, exact=True))
    result = runner.invoke(cli, ["verify", "--group", "Z2", "--subgroup", "1", "--check", "always-fails"])
    assert result.exit_code == 1
    report = json.loads(result.output)
    assert report["cases"][0]["checks"][0]["witness"] == {"reason": "forced"}


def test_main_exit_codes(capsys):
    assert main(["list-groups"]) == 0
    assert "S3" in capsys.readouterr().out
    assert main(["cosets", "--group", "X9"]) == 2
    assert "UnknownGroup" in capsys.readouterr().err
