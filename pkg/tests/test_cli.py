"""End-to-end tests of the volsplit command line."""

import json
import math

import pytest

from volsplit import __version__
from volsplit.cli import create_parser, main
from volsplit.commands.common import emit
from volsplit.config import COMMANDS, build_run_config


def _report(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_no_command_prints_help(capsys):
    assert main([]) == 0
    assert "Examples:" in capsys.readouterr().out


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_parser_knows_every_command():
    parser = create_parser()
    for command in COMMANDS:
        assert parser.parse_args([command]).command == command


def test_lemma35(capsys):
    assert main(["-q", "lemma35", "--beta", "0.75", "--a", "0.25"]) == 0
    report = _report(capsys)
    assert report["command"] == "lemma35"
    assert report["verdict"] == "computed"
    assert report["result"]["minimum"]["minimum"] == pytest.approx(0.75)
    assert report["config"]["inputs"]["beta"] == 0.75


def test_constrained_min_alias(capsys):
    assert main(["-q", "constrained-min", "--beta", "0.75", "--a", "0.25", "--gamma", "1"]) == 0
    report = _report(capsys)
    assert report["command"] == "lemma35"
    assert report["result"]["minimum"]["bound"] < 1.0


def test_run_file(tmp_path, capsys):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "lemma35", "inputs": {"beta": 1.0, "a": 0.3}}))
    assert main(["-q", "lemma35", "--config", str(path)]) == 0
    report = _report(capsys)
    assert report["result"]["minimum"]["alpha2"] == "inf"


def test_hardy_bounded(capsys):
    assert main(["-q", "hardy", "--u", "1", "--v", "1/x"]) == 0
    report = _report(capsys)
    assert report["verdict"] == "bounded"
    assert report["result"]["criterion"]["per_k"][0]["supremum"] == pytest.approx(1.0, rel=1e-6)


def test_hardy_infinite_supremum_is_encoded(capsys):
    assert main(["-q", "hardy", "--u", "1", "--v", "1"]) == 0
    report = _report(capsys)
    assert report["verdict"] == "unbounded"
    assert report["result"]["criterion"]["per_k"][0]["supremum"] == "inf"


def test_hardy_csv(capsys):
    assert main(["-q", "hardy", "--u", "1", "--v", "1/x", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "criterion,k,r,product"
    assert lines[1].startswith("hardy,0,")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "hardy.json"
    assert main(["hardy", "--u", "1", "--v", "1/x", "--output", str(target)]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "Report written to" in captured.err
    assert json.loads(target.read_text())["command"] == "hardy"


def test_malformed_weight(capsys):
    assert main(["hardy", "--u", "1+*x", "--v", "1"]) == 1
    assert "offset 2" in capsys.readouterr().err


def test_missing_input(capsys):
    assert main(["hardy", "--u", "1"]) == 1
    assert "--v" in capsys.readouterr().err


def test_csv_without_rows(capsys):
    assert main(["lemma35", "--beta", "0.75", "--a", "0.25", "--format", "csv"]) == 1
    assert "use --format json" in capsys.readouterr().err


def test_check_doubling(capsys):
    argv = ["-q", "check-doubling", "--weight", "1", "--pairs", "[[0, 1], [0, 4]]"]
    assert main(argv) == 0
    report = _report(capsys)
    assert report["verdict"] == "member"
    assert report["result"]["doubling"]["D"] == pytest.approx(2.0, rel=1e-9)
    assert report["result"]["ratio_bounds"]["passed"] is True


def test_orthopoly(capsys):
    argv = ["-q", "orthopoly", "--weight", "1", "--r", "1", "--n", "2", "--w", "1", "--r-ladder", "1", "2", "4"]
    assert main(argv) == 0
    report = _report(capsys)
    assert report["verdict"] == "pass"
    roots = report["result"]["system"]["roots"]
    assert roots == pytest.approx([(3 - math.sqrt(3)) / 6, (3 + math.sqrt(3)) / 6], rel=1e-10)
    assert report["result"]["markov_growth"]["passed"] is True
    assert len(report["result"]["mass_set"]["intervals"]) == 2


def test_gram_and_witness(capsys):
    assert main(["-q", "gram", "--u", "1", "--n", "1", "--r", "2", "--r-ladder", "1", "4"]) == 0
    assert _report(capsys)["result"]["gram_ratio"] == pytest.approx(0.5, rel=1e-10)
    assert main(["-q", "witness", "--u", "1", "--n", "1", "--r", "2", "--r-ladder", "1", "4"]) == 0
    report = _report(capsys)
    assert report["result"]["witness"]["epsilon_achieved"] == pytest.approx(0.5, rel=1e-10)
    assert report["result"]["identity_residual"] < 1e-10


def test_op_norm(capsys):
    argv = ["-q", "op-norm", "--kernel", "1", "--u", "1", "--v", "exp(-x)", "--R", "8", "--N", "128"]
    assert main(argv) == 0
    report = _report(capsys)
    assert report["verdict"] == "estimated"
    assert report["result"]["causality_violation"] == 0.0
    assert report["result"]["bounds"]["upper_bound_holds"] is True


def test_inconclusive_exit_status(cli_args, capsys):
    config = build_run_config("hardy")
    assert emit(cli_args(), config, "inconclusive", {}) == 2
    assert _report(capsys)["verdict"] == "inconclusive"


def test_ladder_table_in_summary(capsys):
    assert main(["gram", "--u", "1", "--n", "1", "--r-ladder", "1", "4"]) == 0
    err = capsys.readouterr().err
    lines = err.splitlines()
    header = next(i for i, line in enumerate(lines) if line.split()[:1] == ["r"])
    assert set(lines[header + 1].replace(" ", "")) == {"-"}
    assert "Verdict: pass" in err
