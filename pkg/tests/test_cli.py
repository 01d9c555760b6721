# tests/test_cli.py
"""
Tests for the command-line interface: output formats and exit codes
"""
import json
import sys
from pathlib import Path

import pytest

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.cli import parse_q, run
from app.config import reset_settings
from app.errors import ConfigError

# =============================================================================
# Test Fixtures
# =============================================================================

@pytest.fixture
def invoke(capsys):
    """Run the CLI and return (exit code, stdout, stderr)"""
    def _invoke(*argv):
        code = run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return _invoke


def csv_rows(text):
    return [line.split(",") for line in text.splitlines()]

# =============================================================================
# cg / threej
# =============================================================================

def test_cg_json(invoke):
    """Exact and float forms of <1/2 1/2 1/2 -1/2|1 0>"""
    code, out, _ = invoke("cg", "1/2", "1/2", "1/2", "-1/2", "1", "0")
    assert code == 0
    record = json.loads(out)
    assert record["sign"] == 1
    assert record["radicand"] == "1/2"
    assert record["exact"] == "sqrt(1/2)"
    assert record["value"] == pytest.approx(0.70710678, abs=1e-8)


def test_cg_selection_rule_zero(invoke):
    """m != m1 + m2 prints an exact zero"""
    code, out, _ = invoke("cg", "1/2", "1/2", "1/2", "1/2", "1", "0")
    assert code == 0
    record = json.loads(out)
    assert record["sign"] == 0
    assert record["exact"] == "0"
    assert record["value"] == 0.0


def test_cg_stretched_is_one(invoke):
    """<5/2 5/2 2 2|9/2 9/2> = +1"""
    code, out, _ = invoke("cg", "5/2", "5/2", "2", "2", "9/2", "9/2")
    assert code == 0
    record = json.loads(out)
    assert record["sign"] == 1
    assert record["radicand"] == "1"
    assert record["value"] == 1.0


def test_cg_csv(invoke):
    """CSV record with header"""
    code, out, _ = invoke("cg", "1/2", "-1/2", "1/2", "1/2", "0", "0", "--format", "csv")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0] == ["label", "sign", "radicand", "exact", "value"]
    assert rows[1][:4] == ["<1/2 -1/2 1/2 1/2|0 0>", "-1", "1/2", "-sqrt(1/2)"]


def test_cg_parse_failure(invoke):
    """Unparseable quantum numbers exit with 1"""
    code, out, err = invoke("cg", "1/3", "1/2", "1/2", "-1/2", "1", "0")
    assert code == 1
    assert out == ""
    assert "1/3" in err


def test_cg_bad_pair(invoke):
    """|m| > j exits with 1"""
    code, _, err = invoke("cg", "1/2", "3/2", "1/2", "-1/2", "1", "1")
    assert code == 1
    assert "Error" in err


def test_threej(invoke):
    """(1 1 0; 0 0 0) = -sqrt(1/3)"""
    code, out, _ = invoke("threej", "1", "1", "0", "0", "0", "0")
    assert code == 0
    record = json.loads(out)
    assert record["kind"] == "threej"
    assert record["exact"] == "-sqrt(1/3)"


def test_missing_arguments(invoke):
    """Usage errors exit with 1"""
    code, _, err = invoke("cg", "1/2", "1/2")
    assert code == 1
    assert err


def test_unknown_command(invoke):
    """Unknown subcommands are usage errors"""
    code, _, _ = invoke("sixj", "1", "1")
    assert code == 1


# =============================================================================
# table
# =============================================================================

def test_table_half_half(invoke):
    """4x4 CSV with j:m header and m1:m2 row labels"""
    code, out, _ = invoke("table", "1/2", "1/2")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0] == ["m1:m2", "1:1", "1:0", "1:-1", "0:0"]
    assert rows[1] == ["1/2:1/2", "1", "0", "0", "0"]
    assert rows[2] == ["1/2:-1/2", "0", "1/2", "0", "1/2"]
    assert len(rows) == 5
    assert out.endswith("\n") and "\r" not in out


def test_table_trivial_coupling(invoke):
    """(1, 0) is the 3x3 identity"""
    code, out, _ = invoke("table", "1", "0")
    assert code == 0
    body = [row[1:] for row in csv_rows(out)[1:]]
    assert body == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]


def test_table_is_deterministic(invoke):
    """Identical invocations give byte-identical output"""
    _, first, _ = invoke("table", "5/2", "2")
    _, second, _ = invoke("table", "5/2", "2")
    assert first == second
    assert len(csv_rows(first)) == 31


def test_table_json(invoke):
    """JSON dump carries labels and p/q entries"""
    code, out, _ = invoke("table", "1/2", "1/2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["N"] == 4
    assert payload["columns"][0] == "1:1"
    assert payload["entries"][1][1] == "1/2"


def test_table_to_file(invoke, tmp_path):
    """--out writes the file and leaves stdout empty"""
    target = tmp_path / "table.csv"
    code, out, _ = invoke("table", "1/2", "1/2", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text(encoding="utf-8").startswith("m1:m2,1:1")


def test_unwritable_out_path(invoke, tmp_path):
    """An --out path in a missing directory exits with 1 and a message"""
    target = tmp_path / "missing" / "record.json"
    code, out, err = invoke("cg", "1/2", "1/2", "1/2", "-1/2", "1", "0", "--out", str(target))
    assert code == 1
    assert out == ""
    assert "cannot write" in err
    assert not target.exists()


# =============================================================================
# verify
# =============================================================================

def test_verify_anchor_block(invoke):
    """verify 5/2 2 passes with exit 0"""
    code, out, _ = invoke("verify", "5/2", "2")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["log_base"] == "e"
    assert len(report["columns"]) == 30


def test_verify_q_range(invoke):
    """verify 3 5/2 --q 0.1:3:0.1 passes"""
    code, out, _ = invoke("verify", "3", "5/2", "--q", "0.1:3:0.1")
    assert code == 0
    report = json.loads(out)
    assert len(report["q_grid"]) == 30
    assert report["passed"] is True


def test_verify_half_half_margins(invoke):
    """Margins of (1/2, 1/2) at q = 1 are 0 or ln 2"""
    code, out, _ = invoke("verify", "1/2", "1/2", "--q", "1")
    assert code == 0
    margins = sorted(c["subadditivity_margin"] for c in json.loads(out)["columns"])
    assert margins == pytest.approx([0.0, 0.0, 0.693147180560, 0.693147180560], abs=1e-11)


def test_verify_log_base_2(invoke):
    """--log-base 2 switches every Shannon quantity to bits"""
    code, out, _ = invoke("verify", "5/2", "2", "--log-base", "2", "--q", "2")
    assert code == 0
    report = json.loads(out)
    assert report["log_base"] == "2"
    column = next(c for c in report["columns"] if (c["j"], c["m"]) == ("9/2", "1/2"))
    assert column["mutual_information"] == pytest.approx(1.697, abs=1e-3)


def test_verify_csv(invoke):
    """CSV has one row per column and one margin column per q"""
    code, out, _ = invoke("verify", "1", "1", "--q", "0.25,4", "--format", "csv")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0][-2:] == ["tsallis_q=0.25", "tsallis_q=4"]
    assert len(rows) == 10


@pytest.mark.parametrize("q", ["0:1:0.1", "1:0.5:0.1", "0.1:1:0", "1:2", "x"])
def test_verify_bad_q(invoke, q):
    """Invalid q input exits with 1"""
    code, _, _ = invoke("verify", "1", "1", "--q", q)
    assert code == 1


def test_parse_q_forms():
    """Ranges and lists"""
    assert parse_q("0.5,1,2") == [0.5, 1.0, 2.0]
    assert parse_q("1:1.2:0.1") == [1.0, 1.1, 1.2]
    with pytest.raises(ConfigError):
        parse_q("0.5:0.1:0.1")


# =============================================================================
# sweep-tsallis
# =============================================================================

def test_sweep_anchor_column(invoke):
    """Default grid: q = 1 row gives I = 1.176, q = 2 row 0.6456"""
    code, out, _ = invoke("sweep-tsallis", "5/2", "2", "9/2", "1/2")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0] == ["q", "I_q"]
    values = {float(q): float(v) for q, v in rows[1:]}
    assert len(values) == 60
    assert values[1.0] == pytest.approx(1.176, abs=1e-3)
    assert values[2.0] == pytest.approx(0.6456, abs=1e-4)
    assert all(v >= 0 for v in values.values())


def test_sweep_delta_column(invoke):
    """A stretched m = j column gives zero everywhere"""
    code, out, _ = invoke("sweep-tsallis", "5/2", "2", "9/2", "9/2", "--q", "0.5:2:0.5")
    assert code == 0
    rows = csv_rows(out)[1:]
    assert [v for _, v in rows] == ["0", "0", "0", "0"]


def test_sweep_json(invoke):
    """JSON rows keep q and I_q"""
    code, out, _ = invoke("sweep-tsallis", "5/2", "2", "9/2", "1/2", "--q", "1", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["j"] == "9/2"
    assert report["rows"][0]["q"] == 1.0
    assert report["rows"][0]["tsallis_information"] == pytest.approx(1.176, abs=1e-3)


def test_sweep_bad_column(invoke):
    """A column outside the block exits with 1"""
    code, _, _ = invoke("sweep-tsallis", "1/2", "1/2", "2", "0")
    assert code == 1


# =============================================================================
# hahn-check / orthogonality
# =============================================================================

@pytest.mark.parametrize("j1, j2", [("5/2", "2"), ("1/2", "1/2"), ("2", "2")])
def test_hahn_check(invoke, j1, j2):
    """Exact agreement, nothing skipped"""
    code, out, _ = invoke("hahn-check", j1, j2)
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["skipped"] == []
    assert report["matched"] == report["checked"]


def test_hahn_check_csv_summary(invoke):
    """CSV output starts with a summary comment"""
    code, out, _ = invoke("hahn-check", "3", "1/2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# checked=")
    assert lines[1] == "label,status,direct,via_hahn"
    assert any(line.endswith(",skipped,,") for line in lines[2:])


def test_orthogonality_command(invoke):
    """Both relations hold exactly"""
    code, out, _ = invoke("orthogonality", "2", "3/2")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["worst_residual"] == "0"


# =============================================================================
# Settings
# =============================================================================

def test_spin_limit_from_environment(invoke, monkeypatch):
    """CGENTROPY_MAX_TWICE_SPIN rejects large spins"""
    monkeypatch.setenv("CGENTROPY_MAX_TWICE_SPIN", "4")
    reset_settings()
    try:
        code, _, err = invoke("table", "3", "1")
    finally:
        monkeypatch.delenv("CGENTROPY_MAX_TWICE_SPIN")
        reset_settings()
    assert code == 1
    assert "limit" in err


def test_default_log_base_from_environment(invoke, monkeypatch):
    """CGENTROPY_LOG_BASE sets the default base"""
    monkeypatch.setenv("CGENTROPY_LOG_BASE", "2")
    reset_settings()
    try:
        code, out, _ = invoke("verify", "1/2", "1/2", "--q", "1")
    finally:
        monkeypatch.delenv("CGENTROPY_LOG_BASE")
        reset_settings()
    assert code == 0
    assert json.loads(out)["log_base"] == "2"
