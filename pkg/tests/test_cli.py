"""Command line: verbs, exit codes, JSON schema, text/json agreement."""
import io
import json
import subprocess
import sys

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from skewring.cli import FAMILIES, VERBS, Command, main, parse_command, parse_conjunction, run_command
from skewring.theorems import BATCH_SCHEMA


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(parse_command(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_props_ex1_negb():
    code, out, _ = run(["props", "--ring", "ex1", "--endo", "negb"])
    assert "sigma-compatible: holds" in out.splitlines()
    assert code == 0


def test_props_json_matches_text():
    code_t, text, _ = run(["props", "--ring", "ex3"])
    code_j, js, _ = run(["props", "--ring", "ex3", "--json"])
    assert code_t == code_j == 1
    verdicts = json.loads(js)
    for v, line in zip(verdicts, text.splitlines()):
        assert line.startswith(f"{v['property']}: {'holds' if v['holds'] else 'fails'}")


def test_skew_idempotents_ex3():
    code, out, _ = run(["skew-idempotents", "--ring", "ex3", "--endo", "swap", "--degree", "1"])
    lines = out.splitlines()
    assert code == 0
    assert "(1,0) + (0,1)*x" in lines and "(0,1) + (0,1)*x" in lines
    assert len(lines) == 8


def test_idempotents_and_validate():
    code, out, _ = run(["idempotents", "--ring", "Z(6)"])
    assert out.split() == ["0", "1", "3", "4"]
    code, out, _ = run(["validate", "--ring", "prod(Z(2),Z(3))"])
    assert code == 0 and out.splitlines() == ["prod(Z(2),Z(3)): order 6", "ring: holds"]
    code, out, _ = run(["validate", "--ring", "ex3"])
    assert code == 0 and out.splitlines()[-1] == "endomorphism: holds"


def test_claim_verb():
    code, out, _ = run(["claim", "C11", "--ring", "ex3"])
    assert code == 0 and "C11 ex3 d=1 m=2: pass" in out
    code, out, _ = run(["claim", "C12", "--json"])
    data = json.loads(out)
    jsonschema.validate(data, BATCH_SCHEMA)
    assert len(data) == 7


def test_verify_paper_json():
    code, out, _ = run(["verify-paper", "--json"])
    data = json.loads(out)
    jsonschema.validate(data, BATCH_SCHEMA)
    assert code == 0 and len(data) == 84
    assert not [r for r in data if r["status"] == "fail"]


def test_text_and_json_reports_agree():
    _, text, _ = run(["verify-paper"])
    _, js, _ = run(["verify-paper", "--json"])
    for r, line in zip(json.loads(js), text.splitlines()):
        assert line.startswith(f"{r['claim']} {r['entry']} d={r['bounds']['d']} m={r['bounds']['m']}: {r['status']}")


def test_search():
    code, out, _ = run(["search", "--property", "abelian,!sigma-compatible", "--family", "prod", "--max-order", "4"])
    assert code == 0 and "prod(Z(2),Z(2))" in out
    code, out, _ = run(["search", "--property", "reflexive,!idem-reflexive", "--max-order", "8"])
    assert code == 1 and "no instance" in out


def test_search_conjunction_parse():
    assert parse_conjunction("abelian, !reflexive") == [("abelian", True), ("reflexive", False)]


@pytest.mark.parametrize("argv", [
    ["props", "--ring", "mat(2, Z("],
    ["props", "--ring", "ex9"],
    ["props"],
    ["props", "--ring", "Z(4)", "--property", "shiny"],
    ["claim", "C99"],
    ["verify-paper", "--degree", "0"],
    ["skew-idempotents", "--ring", "mat(2,Z(2))", "--degree", "9"],
    ["props", "--ring", "Z(4)", "--endo", "table(0:0,1:3,2:2,3:1)"],
])
def test_usage_errors_exit_2(argv):
    code, out, err = run(argv)
    assert code == 2 and err and not out


def test_syntax_error_diagnostic():
    _, _, err = run(["validate", "--ring", "mat(2, Z("])
    assert "offset 9" in err and "INT" in err


def test_argparse_errors():
    assert main(["frobnicate"]) == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "skewring.cli", "props", "--ring", "ex1", "--property", "abelian"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "abelian: holds"


commands = st.builds(
    Command,
    verb=st.sampled_from(VERBS),
    ring=st.one_of(st.none(), st.sampled_from(["ex1", "Z(4)", "prod(Z(2),Z(2))", "mat(2,Z(2))"])),
    endo=st.one_of(st.none(), st.sampled_from(["id", "swap", "table(0:0,1:1)"])),
    claim=st.one_of(st.none(), st.sampled_from([f"C{i}" for i in range(1, 13)])),
    degree=st.one_of(st.none(), st.integers(0, 5)),
    trunc=st.one_of(st.none(), st.integers(1, 5)),
    property=st.one_of(st.none(), st.sampled_from(["abelian", "abelian,!reflexive"])),
    family=st.one_of(st.none(), st.sampled_from(FAMILIES)),
    max_order=st.one_of(st.none(), st.integers(1, 64)),
    json=st.booleans(),
    seed=st.one_of(st.none(), st.integers(0, 2**31)),
    sampled=st.booleans(),
    workers=st.one_of(st.none(), st.integers(1, 8)),
    timing=st.booleans(),
)


@settings(max_examples=200, deadline=None)
@given(commands)
def test_command_round_trip(cmd):
    assert parse_command(cmd.render()) == cmd
