from __future__ import annotations

import json
import subprocess
import sys

import pytest

from funcspec import cli
from funcspec.spectrum import FiniteThmReport

SPECTRUM_CONFIG = {"E": [0, 1, 2], "M": 2, "generators": {"x": "x"}}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_normform_report(capsys):
    code, out, _ = run(capsys, "normform", "--p", "2", "--k", "2")
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "normform"
    assert report["result"]["form"] == "x0^2 + x0*x1 + x1^2"
    assert report["result"]["only-trivial-zero"] == "pass"
    assert report["result"]["terms"] == [[[0, 2], 1], [[1, 1], 1], [[2, 0], 1]]


def test_spectrum_report(tmp_path, capsys):
    code, out, _ = run(capsys, "spectrum", write(tmp_path, SPECTRUM_CONFIG))
    assert code == 0
    result = json.loads(out)["result"]
    assert result["prime_count"] == 2 and result["ultrafilters"] == 3
    assert result["fibration"] == [[0, 2], [1]]
    assert result["verdict"] == "pass"


def test_config_flag_and_positional_are_equivalent(tmp_path, capsys):
    path = write(tmp_path, SPECTRUM_CONFIG)
    _, a, _ = run(capsys, "spectrum", path)
    _, b, _ = run(capsys, "spectrum", "--config", path)
    assert a == b
    code, _, err = run(capsys, "spectrum", path, "--config", path)
    assert code == 2 and "either" in err


def test_duplicate_point_exits_2(tmp_path, capsys):
    code, out, err = run(capsys, "spectrum", write(tmp_path, {"E": [0, 1, 1], "M": 2}))
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "DuplicatePoint"


@pytest.mark.parametrize(
    "argv,config,error",
    [
        (["normform", "--p", "4"], None, "InputError"),
        (["normform", "--p", "3", "--k", "13"], None, "TooLarge"),
        (["combine"], {"E": [0, 1], "M": 2, "f": "2x", "g": "1"}, "ExpressionSyntaxError"),
        (["combine"], {"E": [0, 1], "M": 2, "f": "z", "g": "1"}, "UnknownIdentifier"),
        (["unitlift"], {"E": [0, 1], "M": 2, "g": [1, 2]}, "NotUnitValued"),
        (["filters"], {"n": 3, "family": [[0], [1]]}, "FIPViolated"),
        (["divide"], {"f": [0, 1], "c": 2}, "NotDivisible"),
        (["spectrum"], {"E": [0, 1], "M": 0}, "NotFinite"),
        (["spectrum"], {"E": [0, 1], "base": {"kind": "Rationals"}}, "InputError"),
        (["verify-all", "--criteria", "11"], None, "InputError"),
    ],
)
def test_input_errors_exit_2(tmp_path, capsys, argv, config, error):
    if config is not None:
        argv = argv + [write(tmp_path, config)]
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == error


def test_syntax_error_reports_position(tmp_path, capsys):
    path = write(tmp_path, {"E": [0, 1], "M": 2, "f": "((x+1)", "g": "1"})
    _, _, err = run(capsys, "combine", path)
    assert json.loads(err)["position"] == 6


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["nosuchcommand"])
    assert exc.value.code == 2


def test_missing_config_file_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "spectrum", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err


def test_verification_failure_exits_1(tmp_path, capsys, monkeypatch):
    def broken(R, M, cap):
        return FiniteThmReport(4, 4, [], [], [], True, False, True, True, ["primes differ from the point kernels"])

    monkeypatch.setattr(cli, "verify_finitethm", broken)
    code, out, _ = run(capsys, "spectrum", write(tmp_path, SPECTRUM_CONFIG))
    assert code == 1
    assert json.loads(out)["result"]["failures"] == ["primes differ from the point kernels"]


def test_flags_override_config(tmp_path, capsys):
    path = write(tmp_path, {"p": 3, "k": 2})
    _, out, _ = run(capsys, "normform", path, "--p", "2")
    report = json.loads(out)
    assert report["input"] == {"p": 2, "k": 2}
    assert report["result"]["p"] == 2


@pytest.mark.parametrize(
    "command,config",
    [
        ("combine", {"E": [0, 1], "M": 2, "generators": {"x": "x"}, "f": [1, 2], "g": [2, 2]}),
        ("unitlift", {"E": [0, 1], "M": 5, "g": [2, 7]}),
        ("zerolocus", {"E": [0, 1, 2], "M": 2, "generators": {"x": "x"}, "ideal": ["x*(x-1)"]}),
        ("filters", {"n": 3, "family": [[0, 1], [1, 2]]}),
        ("dichotomy", {"base": {"kind": "IntegersMod", "m": 6}, "E": [0], "M": 2}),
        ("ultraproduct", {"rings": [{"kind": "PrimeField", "p": 2}, {"kind": "ExtField", "p": 2, "k": 2}], "point": 1}),
        ("chabert", {"f": [0, 0, 1], "alpha": {"p": 2, "N": 1, "r": 1}}),
        ("divide", {"f": "x^2 + x", "c": 2, "containment": {"p": 2}, "pseudoprincipal": {"q": 2, "p": 12}}),
    ],
)
def test_commands_succeed_and_are_deterministic(tmp_path, capsys, command, config):
    path = write(tmp_path, config)
    code, first, _ = run(capsys, command, path)
    assert code == 0
    _, second, _ = run(capsys, command, path)
    assert first == second
    assert list(json.loads(first)) == ["command", "input", "result"]


def test_command_results(tmp_path, capsys):
    cfg = {"E": [0, 1], "M": 2, "generators": {"x": "x"}, "f": [1, 2], "g": [2, 2], "method": "normform"}
    _, out, _ = run(capsys, "combine", write(tmp_path, cfg))
    assert json.loads(out)["result"]["results"][0]["h"] == [7, 12]
    _, out, _ = run(capsys, "unitlift", write(tmp_path, {"E": [0, 1], "M": 5, "g": [2, 7]}))
    assert json.loads(out)["result"]["f"] == [6, 21]
    _, out, _ = run(capsys, "chabert", write(tmp_path, {"f": [0, 0, 1], "alpha": {"p": 2, "N": 1, "r": 1}}))
    assert json.loads(out)["result"]["status"] == "InsufficientPrecision"
    _, out, _ = run(capsys, "chabert", write(tmp_path, {"f": [0, 0, 1]}), "--p", "2", "--N", "2", "--r", "0")
    assert json.loads(out)["result"]["status"] == "Member"
    _, out, _ = run(capsys, "divide", write(tmp_path, {"f": [2, 0, 0, 6]}), "--c", "2")
    assert json.loads(out)["result"]["g_binomial"] == [1, 0, 0, 3]
    _, out, _ = run(capsys, "filters", write(tmp_path, {"n": 3, "family": []}))
    assert json.loads(out)["result"]["refinements"] == [0, 1, 2]


def test_large_integers_become_strings(tmp_path, capsys):
    _, out, _ = run(capsys, "divide", write(tmp_path, {"f": [0, 2**60], "c": 2}))
    result = json.loads(out)["result"]
    assert result["g_binomial"] == [0, str(2**59)]


def test_report_key_order_is_fixed(capsys):
    _, out, _ = run(capsys, "normform", "--p", "3")
    keys = list(json.loads(out)["result"])
    assert keys == ["p", "k", "modulus", "term_count", "terms", "terms_truncated", "form", "only-trivial-zero"]


def test_verify_all_subset(capsys):
    code, out, err = run(capsys, "verify-all", "--seed", "3", "--criteria", "8,9")
    assert code == 0
    report = json.loads(out)["result"]
    assert [c["id"] for c in report["criteria"]] == [8, 9]
    assert "criterion 8: pass" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "funcspec", "normform", "--p", "3", "--k", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["form"] == "x0^2 + x1^2"
