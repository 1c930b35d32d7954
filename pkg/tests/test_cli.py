import json

import pytest

from lgcy import cli
from lgcy.verify import CriterionResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_iseries_json_deterministic(capsys):
    code1, out1, _ = run(capsys, "iseries", "--case", "cubic33", "--side", "hybrid", "--order", "3")
    code2, out2, _ = run(capsys, "iseries", "--case", "cubic33", "--side", "hybrid", "--order", "3")
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["exact"] is True
    assert payload["case"] == "cubic33"


def test_iseries_csv(capsys):
    code, out, _ = run(
        capsys, "iseries", "--case", "cubic33", "--side", "hybrid",
        "--order", "3", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "f,sector,z_exp,H_power,value"
    assert "4/1,1,1,0,1/26244" in lines
    assert "4/1,1,0,1,7/78732" in lines


def test_pf_check_zero_residual(capsys):
    code, out, _ = run(
        capsys, "pf-check", "--case", "quadric2222", "--side", "hybrid", "--order", "12"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["residual_is_zero"] is True
    # order 12 -> frequencies complete through 13; the shift consumes 2
    assert payload["verified_through"] == "11/1"


def test_statespace_match(capsys):
    code, out, _ = run(capsys, "statespace", "--case", "quadric2222")
    assert code == 0
    payload = json.loads(out)
    assert payload["match"] is True
    assert payload["middle_dimension"] == 132


def test_moduli_vdim(capsys):
    code, out, _ = run(
        capsys, "moduli", "vdim", "--case", "quadric2222",
        "--genus", "0", "--beta", "0", "--multiplicities", "1,1,1",
    )
    assert code == 0
    assert json.loads(out)["result"]["virtual_dimension"] == "3/1"


def test_moduli_ntheta_violation_is_exit_1(capsys):
    code, out, err = run(
        capsys, "moduli", "ntheta", "--case", "cubic33",
        "--multiplicities", "1,1,1",
    )
    assert code == 1
    assert json.loads(err)["error"] == "IntegralityError"


def test_unsupported_case_is_exit_1(capsys):
    code, out, err = run(
        capsys, "iseries", "--case", "quintic", "--side", "hybrid", "--order", "2"
    )
    assert code == 1
    assert json.loads(err)["error"] == "UnsupportedCaseError"


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["iseries", "--case", "cubic33", "--bogus-flag"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["iseries", "--side", "hybrid", "--order", "2"])  # missing case
    assert exc.value.code == 2
    capsys.readouterr()


def test_config_file_defaults_and_flag_priority(capsys, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"case": "cubic33", "side": "gw", "order": 2}))
    code, out, _ = run(capsys, "--config", str(config), "iseries")
    assert code == 0
    assert json.loads(out)["side"] == "gw"
    # explicit flag wins over the config value
    code, out, _ = run(
        capsys, "--config", str(config), "iseries", "--side", "hybrid"
    )
    assert code == 0
    assert json.loads(out)["side"] == "hybrid"


def test_mirror_map_numeric_check(capsys):
    code, out, _ = run(
        capsys, "mirror-map", "--case", "cubic33", "--side", "hybrid",
        "--order", "12", "--numeric-check", "--digits", "35", "--terms", "4",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["numeric_check"]["all_within_budget"] is True


def test_monodromy_cli(capsys):
    code, out, _ = run(
        capsys, "monodromy", "--case", "quadric2222", "--loop", "origin",
        "--digits", "30",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["digits"] == 30
    # the (0,0) entry of the unipotent matrix is 1
    assert payload["matrix"][0][0]["re"] == "1.0"


def test_output_file(capsys, tmp_path):
    target = tmp_path / "series.json"
    code, out, _ = run(
        capsys, "iseries", "--case", "cubic33", "--side", "gw",
        "--order", "1", "--output", str(target),
    )
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["side"] == "gw"


def test_verify_all_reporting(capsys, monkeypatch, tmp_path):
    fake = [
        CriterionResult(1, "alpha", True, 0.1, "fine"),
        CriterionResult(2, "beta", False, 0.2, "broken"),
    ]
    monkeypatch.setattr(cli.verify_mod, "run_all", lambda digits: fake)
    target = tmp_path / "verify.json"
    code, out, _ = run(capsys, "verify-all", "--digits", "30", "--output", str(target))
    assert code == 1
    assert "PASS criterion 1 [alpha]" in out
    assert "FAIL criterion 2 [beta]" in out
    assert json.loads(target.read_text())["all_passed"] is False
    monkeypatch.setattr(
        cli.verify_mod, "run_all", lambda digits: [fake[0]]
    )
    code, out, _ = run(capsys, "verify-all")
    assert code == 0
