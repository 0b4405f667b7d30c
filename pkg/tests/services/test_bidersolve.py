from src.algebra.families import LprimeTable
from src.algebra.superfields import Weight
from src.services.solvers.bidersolve import (
    bracket_coefficients,
    certify_mod_p,
    factor_biderivation,
    inner_residual,
    is_inner,
    solve_bder,
    solve_bder_lie,
    vanishing_crossref,
)
from src.utils.results import BiderSolution, BlockResult
from tests.conftest import sl2_table


class TestInnerResidual:
    def test_bracket_satisfies_both_identities(self, w2):
        for scale in (1, -2, 7):
            report = inner_residual(w2, scale)
            assert report.passed
            assert report.triples_checked == 8**3

    def test_broken_table(self, w2):
        report = inner_residual(w2.perturbed(2, 2, 2))
        assert not report.passed
        assert report.counterexample[0] in ("first", "second")


class TestSolveBder:
    def test_sl2_is_inner(self, sl2):
        even = solve_bder(sl2, 0)
        odd = solve_bder(sl2, 1)
        assert (even.total, odd.total) == (1, 0)
        assert even.bracket_in_span is True
        assert is_inner(even, odd)

    def test_innerness_without_retained_vectors(self, sl2):
        even = solve_bder(sl2, 0, retain=False)
        odd = solve_bder(sl2, 1, retain=False)
        assert even.bracket_in_span is True
        assert is_inner(even, odd)
        assert all(not block.basis for block in even.blocks)

    def test_block_levels_are_degree_shifts(self, w2):
        for block in solve_bder(w2, 1).blocks:
            assert block.epsilon == block.weight.coords
            assert block.level == block.degree

    def test_lie_entry_point(self, sl2):
        assert solve_bder_lie(sl2).total == 1

    def test_abelian_everything_is_a_biderivation(self, abelian2):
        even = solve_bder(abelian2, 0)
        assert even.total == 8
        assert even.bracket_in_span is None
        assert not is_inner(even)
        assert solve_bder(abelian2, 1).total == 0

    def test_early_stop_does_not_change_the_count(self, w2):
        with_bound = solve_bder(w2, 0, inner_verified=True)
        without = solve_bder(w2, 0, inner_verified=False)
        assert with_bound.total == without.total
        assert sum(b.rows_streamed for b in with_bound.blocks) <= sum(b.rows_streamed for b in without.blocks)

    def test_block_limit_aborts(self, w2):
        solution = solve_bder(w2, 0, block_limit=1)
        assert not solution.complete
        assert any(block.status == "aborted" for block in solution.blocks)

    def test_workers_do_not_change_the_result(self, w2):
        serial = solve_bder(w2, 1, workers=1)
        threaded = solve_bder(w2, 1, workers=3)
        summary = lambda solution: [(b.weight, b.degree, b.nullity, b.status) for b in solution.blocks]
        assert summary(serial) == summary(threaded)


class TestCertificate:
    def test_sl2_mod_p(self, sl2):
        certificate = certify_mod_p(sl2, 101)
        assert (certificate.even_nullity, certificate.odd_nullity) == (1, 0)
        assert certificate.valid

    def test_abelian_is_not_certified(self, abelian2):
        assert not certify_mod_p(abelian2, 101).valid

    def test_perturbed_bracket_is_not_certified(self):
        certificate = certify_mod_p(sl2_table().perturbed(1, 0, 0), 101)
        assert not certificate.bracket_residual_zero
        assert not certificate.valid


class TestFactorization:
    def test_bracket_factors_through_identity(self, sl2):
        lprime = LprimeTable(sl2, (0, 1, 2))
        result = factor_biderivation(sl2, lprime, bracket_coefficients(sl2, 3), (Weight((0,)), 0))
        assert result.success
        assert result.graded is True
        assert result.phi[0] == {0: 3}

    def test_abelian_biderivation_does_not_factor(self, abelian2):
        lprime = LprimeTable(abelian2, (0, 1))
        result = factor_biderivation(abelian2, lprime, {(0, 0, 0): 1})
        assert not result.success
        assert result.message


class TestVanishingCrossref:
    def test_off_line_block_is_a_witness(self):
        block = BlockResult(parity=0, weight=Weight((1,)), degree=0, unknowns=3, rank=2, status="solved")
        report = vanishing_crossref([BiderSolution(0, "QQ", [block])])
        assert not report.passed
        assert report.witness["nullity"] == 1

    def test_incomplete_solution_fails_with_witness(self):
        block = BlockResult(parity=0, weight=Weight((0,)), degree=0, unknowns=3, rank=2, status="aborted")
        report = vanishing_crossref([BiderSolution(0, "QQ", [block])])
        assert not report.passed
        assert report.witness == {"unsolved_blocks": 1}

    def test_sl2_passes(self, sl2):
        assert vanishing_crossref([solve_bder(sl2, 0), solve_bder(sl2, 1)]).passed
