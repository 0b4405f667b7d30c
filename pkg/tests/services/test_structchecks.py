from src.algebra.families import build_Lprime
from src.services.checks.structchecks import (
    check_bracket_onto,
    check_generated,
    check_H_pairing,
    check_irreducible,
    check_simplicity_sample,
    check_transitive,
    generated_subalgebra_dimension,
    module_commutant_dimension,
)


class TestGradedChecks:
    def test_w2(self, w2):
        assert check_bracket_onto(w2).passed
        assert check_generated(w2).passed
        assert check_transitive(w2).passed

    def test_local_part_alone_does_not_generate(self, w2):
        report = check_generated(w2, degrees=(-1,))
        assert not report.passed
        assert report.witness["dimension"] == 2

    def test_generated_subalgebra_of_sl2(self, sl2):
        assert generated_subalgebra_dimension(sl2, [{0: 1}, {2: 1}]) == 3
        assert generated_subalgebra_dimension(sl2, [{1: 1}]) == 1

    def test_transitivity_through_lprime(self):
        assert check_transitive(build_Lprime("S", 3)).passed

    def test_abelian_is_not_transitive(self, abelian2):
        report = check_transitive(abelian2)
        assert not report.passed
        assert report.witness


class TestIrreducibility:
    def test_families(self, w2, s3, h5):
        for table in (w2, s3, h5):
            report = check_irreducible(table, seed=0)
            assert report.passed, table.family
            assert report.method == "proxy"
            assert report.details["commutant_dimension"] == 1

    def test_commutant_of_trivial_action(self):
        assert module_commutant_dimension([[{}, {}, {}, {}]], 4) == 16

    def test_commutant_of_one_diagonal_operator(self):
        # diag(1, 2) commutes with the diagonal matrices only
        assert module_commutant_dimension([[{0: 1}, {1: 2}]], 2) == 2


class TestHamiltonianPairing:
    def test_h5(self, h5):
        report = check_H_pairing(h5)
        assert report.passed
        assert set(report.details) == {"0,2", "1,1", "2,0"}

    def test_restricted_partner_degree_fails(self, h5):
        report = check_H_pairing(h5, restrict_l={0: []})
        assert not report.passed
        assert report.witness["k"] == 0


class TestSimplicity:
    def test_w2_is_simple(self, w2):
        report = check_simplicity_sample(w2, seed=3)
        assert report.passed
        assert report.method == "probabilistic"

    def test_central_extension_is_not(self, w2_central):
        report = check_simplicity_sample(w2_central)
        assert not report.passed
        assert report.witness["ideal_dimension"] < w2_central.dim
