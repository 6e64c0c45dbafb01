import json

import pytest

from graphcalc.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_stable_poly_golden_line(capsys):
    code, out = run_cli(["stable-poly", "--g", "2", "--comb"], capsys)
    assert code == 0
    assert out == "5/24*s^3 + 1/8*s^2\n"


def test_stable_poly_json(capsys):
    code, out = run_cli(["stable-poly", "--g", "3", "--comb",
                         "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out) == {"3": "1/48", "4": "11/48", "5": "25/48",
                               "6": "5/16"}


def test_psi_json_parses_and_is_deterministic(capsys):
    argv = ["psi", "--r", "1", "--trunc", "Dx=2,Ds=1,G=1", "--connected",
            "--format", "json"]
    code, first = run_cli(argv, capsys)
    assert code == 0
    code, second = run_cli(argv, capsys)
    assert first == second
    obj = json.loads(first)
    assert obj["trunc"] == {"Dx": 2, "Ds": 1, "G": 1}
    assert all("/" in term["coeff"] for term in obj["terms"])


def test_genus_layer_inline_init(capsys):
    code, out = run_cli(["genus", "--g", "0", "--r", "1",
                         "--trunc", "Dx=4,Ds=1,G=1",
                         "--init", '{"a[0;3]": "1"}'], capsys)
    assert code == 0
    # one cubic vertex and the one-edge tree both fit the box
    assert "x1^3" in out and "s11" in out


def test_enumerate_closed_genus2(capsys):
    code, out = run_cli(["enumerate", "--r", "1", "--trunc", "Dx=0,Ds=3,G=2",
                         "--stable", "--min-genus", "2"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 7
    assert all("genus=2" in line for line in lines)


def test_verify_genus_identities_exit_zero(capsys):
    code, out = run_cli(["verify", "genus-identities",
                         "--trunc", "Dx=2,Ds=1,G=2"], capsys)
    assert code == 0
    assert "FAIL" not in out


def test_verify_asymptotic_tsv(capsys):
    code, out = run_cli(["verify", "asymptotic", "--quartic", "--G", "2"],
                        capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("G\thbar\tnumeric")
    assert lines[-1] == "PASS"
    assert len(lines) == 2 + 2 * 4


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["psi", "--trunc", "bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["psi", "--r", "2", "--trunc", "Dx=1,Ds=1,G=1",
              "--init", "builtin:comb"])
    assert exc.value.code == 2


def test_divergent_request_exits_two(capsys):
    # full series for the counting potential diverges (isolated vertices)
    with pytest.raises(SystemExit) as exc:
        main(["psi", "--r", "1", "--trunc", "Dx=2,Ds=1,G=1",
              "--init", "builtin:comb"])
    assert exc.value.code == 2
