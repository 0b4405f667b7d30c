import json

import pytest
from click.testing import CliRunner

from src import settings
from src.algebra.table_io import export_table, load_table
from src.cli import cli
from src.utils.json_utils import load_report
from tests.conftest import sl2_table


@pytest.fixture
def invoke():
    runner = CliRunner()

    def call(*args):
        return runner.invoke(cli, list(args), obj={"configure_logging": False})

    return call


def test_info(invoke, tmp_path):
    out = tmp_path / "w2.json"
    result = invoke("info", "--family", "W", "--n", "2", "--out", str(out))
    assert result.exit_code == 0, result.output
    report = load_report(str(out))
    assert report.dimensions.L == 8
    assert report.verdict == "verified"
    assert "W(2) over QQ: verified" in result.output


def test_reports_are_reproducible(invoke, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    invoke("info", "--family", "S", "--n", "3", "--out", str(first))
    invoke("info", "--family", "S", "--n", "3", "--out", str(second))
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ("info", "--family", "Stilde", "--n", "5"),
        ("info", "--family", "H", "--n", "3"),
        ("info", "--family", "K", "--n", "3"),
        ("info",),
        ("bder", "--family", "W", "--n", "2", "--field", "modp", "--prime", "100"),
    ],
)
def test_usage_errors(invoke, tmp_path, args):
    result = invoke(*args, "--out", str(tmp_path / "report.json"))
    assert result.exit_code == 2
    assert not (tmp_path / "report.json").exists()


def test_broken_table_fails(invoke, tmp_path, w2):
    path = export_table(w2.perturbed(2, 2, 2), str(tmp_path / "broken.tbl"))
    result = invoke("jacobi", "--table", path, "--out", str(tmp_path / "report.json"))
    assert result.exit_code == 1
    report = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert report["predicates"]["super_jacobi"] == "failed"


def test_export(invoke, tmp_path):
    path = tmp_path / "tables" / "s3.tbl"
    result = invoke("export", "--family", "S", "--n", "3", "--lprime", "--out", str(path))
    assert result.exit_code == 0
    assert load_table(str(path)).dim == 18


def test_block_limit_gives_incomplete(invoke, tmp_path):
    result = invoke("bder", "--family", "W", "--n", "2", "--block-limit", "1", "--out", str(tmp_path / "r.json"))
    assert result.exit_code == 3


def test_lemmas_out_of_scope(invoke, tmp_path):
    result = invoke("lemmas", "--family", "W", "--n", "2", "--out", str(tmp_path / "r.json"))
    assert result.exit_code == 0
    report = load_report(str(tmp_path / "r.json"))
    assert report.predicates["transitivity"] == "passed"


def test_der_s3(invoke, tmp_path):
    result = invoke("der", "--family", "S", "--n", "3", "--out", str(tmp_path / "r.json"))
    assert result.exit_code == 0
    report = load_report(str(tmp_path / "r.json"))
    assert report.derivations.dimension == 18
    assert report.derivations.outer == ["C"]


def test_certificate_for_a_loaded_table(invoke, tmp_path):
    path = export_table(sl2_table(), str(tmp_path / "sl2.tbl"))
    result = invoke(
        "bder", "--table", path, "--field", "modp", "--prime", "101", "--blocks", "--out", str(tmp_path / "r.json")
    )
    assert result.exit_code == 0, result.output
    report = load_report(str(tmp_path / "r.json"))
    assert report.certificates[0].valid
    assert report.predicates["certificate"] == "not_applicable"
    assert "nullity" in result.output


@pytest.mark.parametrize("command", ["der", "bder", "all"])
def test_table_breaking_its_gradings_gets_a_report(invoke, tmp_path, w2, command):
    path = export_table(w2.perturbed(0, 1, 0), str(tmp_path / "graded.tbl"))
    out = tmp_path / "r.json"
    result = invoke(command, "--table", path, "--out", str(out))
    assert result.exit_code == 1, result.output
    report = load_report(str(out))
    assert report.predicates["table_invariants"] == "failed"
    assert report.verdict == "failed"


def test_perturbed_table_fails_the_certificate(invoke, tmp_path, w2):
    path = export_table(w2.perturbed(2, 2, 2), str(tmp_path / "broken.tbl"))
    out = tmp_path / "r.json"
    result = invoke("bder", "--table", path, "--field", "modp", "--prime", "101", "--out", str(out))
    assert result.exit_code == 1, result.output
    report = load_report(str(out))
    assert report.predicates["inner_residual"] == "failed"
    assert not report.certificates[0].valid
    assert not report.certificates[0].bracket_residual_zero


def test_field_default_follows_the_family(invoke, tmp_path):
    out = tmp_path / "r.json"
    result = invoke("info", "--family", "W", "--n", "4", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert load_report(str(out)).field == f"GF({settings.PRIME})"
    invoke("info", "--family", "W", "--n", "3", "--out", str(out))
    assert load_report(str(out)).field == "QQ"
