import pytest
from click.testing import CliRunner

from src.algebra.families import FamilySpec, build_family, build_Lprime, degree_zero_part
from src.cli import cli
from src.services.solvers.bidersolve import certify_mod_p, is_inner, solve_bder, solve_bder_lie
from src.services.solvers.dersolve import classify_derivations, solve_derivations
from src.services.verification.verification_run import VerificationRun
from src.utils.json_utils import load_report

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("family, n", [("W", 4), ("S", 4), ("Stilde", 4), ("H", 5)])
def test_derivations_are_inner(family, n):
    table = build_family(FamilySpec(family, n))
    solutions = [solve_derivations(table, parity) for parity in (0, 1)]
    classification = classify_derivations(solutions, table, build_Lprime(family, n))
    assert classification.passed, classification.witness


@pytest.mark.parametrize("family, n", [("W", 4), ("S", 4), ("Stilde", 4), ("H", 5)])
def test_biderivations_are_certified(family, n):
    certificate = certify_mod_p(build_family(FamilySpec(family, n)), 2**31 - 1)
    assert certificate.valid
    assert (certificate.even_nullity, certificate.odd_nullity) == (1, 0)
    assert all(block.nullity == 0 for block in certificate.blocks if not block.is_inner_line)


@pytest.mark.parametrize("family, n", [("W", 4), ("S", 4), ("Stilde", 4), ("H", 5)])
def test_structure_checks(family, n):
    table = build_family(FamilySpec(family, n))
    report = VerificationRun(table, ("info", "jacobi", "lemmas"), lprime=build_Lprime(family, n)).start()
    assert report.jacobi.passed
    assert report.predicates["roots"] == "passed"
    assert report.predicates["bracket_onto"] == "passed"
    assert report.predicates["transitivity"] == "passed"
    assert report.predicates["irreducibility"] == "passed"
    assert report.verdict == "verified", report.predicates


def test_s4_biderivations_are_inner_over_q():
    table = build_family(FamilySpec("S", 4))
    even = solve_bder(table, 0, retain=False)
    odd = solve_bder(table, 1, retain=False)
    assert (even.total, odd.total) == (1, 0)
    assert is_inner(even, odd)


@pytest.mark.parametrize("family, n, dim", [("S", 4, 15), ("H", 5, 10)])
def test_degree_zero_lie_algebra(family, n, dim):
    zero_part = degree_zero_part(build_family(FamilySpec(family, n)))
    assert zero_part.dim == dim
    assert is_inner(solve_bder_lie(zero_part))


def test_h5_full_run(tmp_path):
    result = CliRunner().invoke(
        cli,
        ["all", "--family", "H", "--n", "5", "--field", "modp", "--out", str(tmp_path / "h5.json")],
        obj={"configure_logging": False},
    )
    assert result.exit_code == 0, result.output


def test_w4_full_run_uses_the_certificate(tmp_path):
    out = tmp_path / "w4.json"
    result = CliRunner().invoke(
        cli,
        ["all", "--family", "W", "--n", "4", "--out", str(out)],
        obj={"configure_logging": False},
    )
    assert result.exit_code == 0, result.output
    report = load_report(str(out))
    assert report.certificates[0].valid
    assert report.predicates["certificate"] == "passed"
    assert report.predicates["innerness"] == "passed"
