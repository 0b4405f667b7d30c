import pytest

from src.algebra.exterior import GrassmannPoly, basis
from src.algebra.families import (
    D_H,
    FamilySpec,
    build_family,
    build_Lprime,
    build_S,
    compare_roots,
    degree_zero_part,
    divergence,
    epsilon_lift,
    epsilon_projection,
    expected_dimensions,
    expected_roots,
    in_theorem_scope,
    prime_index,
)
from src.algebra.superfields import (
    SuperVectorField,
    Weight,
    apply,
    check_super_jacobi,
    verify_table_invariants,
    vf_bracket,
)
from src.utils.exceptions import FamilyError


class TestFamilySpec:
    @pytest.mark.parametrize("family, n", [("Stilde", 5), ("H", 3), ("W", 1), ("K", 4)])
    def test_invalid(self, family, n):
        with pytest.raises(FamilyError):
            FamilySpec(family, n)

    def test_label(self):
        assert FamilySpec("S", 3).label == "S(3)"
        assert FamilySpec("H", 5, lprime=True).label == "Lprime[H(5)]"

    @pytest.mark.parametrize(
        "family, n, expected",
        [("W", 3, False), ("W", 4, True), ("S", 4, True), ("Stilde", 4, True), ("H", 4, False), ("H", 5, True)],
    )
    def test_theorem_scope(self, family, n, expected):
        assert in_theorem_scope(FamilySpec(family, n)) is expected


@pytest.mark.parametrize("family, n", [("W", 2), ("W", 3), ("S", 3), ("H", 4), ("H", 5), ("S", 4), ("Stilde", 4)])
def test_dimensions_match_closed_formulas(family, n):
    table = build_family(FamilySpec(family, n))
    expected = expected_dimensions(family, n)
    assert table.dim == expected["L"]
    assert len(degree_zero_part(table).parity) == expected["L0"]
    assert table.top_degree == expected["top_degree"]
    assert verify_table_invariants(table) == []


def test_expected_dimensions_unknown_family():
    with pytest.raises(FamilyError):
        expected_dimensions("K", 4)


def test_w3_parity_split(w3):
    assert w3.parity_census() == {0: 12, 1: 12}


@pytest.mark.parametrize("fixture", ["w3", "s3", "h5"])
def test_super_jacobi_holds(fixture, request):
    assert check_super_jacobi(request.getfixturevalue(fixture)).passed


@pytest.mark.parametrize("fixture", ["w3", "s3", "h5"])
def test_roots_match(fixture, request):
    table = request.getfixturevalue(fixture)
    comparison = compare_roots(table)
    assert comparison.passed, (comparison.missing, comparison.unexpected)


def test_expected_roots_of_w2():
    assert len(expected_roots("W", 2)) == 6


def test_stilde_degree_is_cyclic():
    table = build_family(FamilySpec("Stilde", 4))
    assert table.degree_modulus == 4
    assert table.degree_key(-1) == table.degree_key(3)
    assert table.indices_of_degree(-1) == table.indices_of_degree(3) == [0, 1, 2, 3]


class TestLprime:
    def test_w_is_its_own(self, w2):
        lprime = build_Lprime("W", 2)
        assert lprime.table.dim == w2.dim
        assert lprime.outer == ()

    def test_s_adds_grading_element(self):
        lprime = build_Lprime("S", 3)
        assert lprime.table.dim == 18
        assert lprime.outer == (17,)
        assert lprime.table.labels[17] == "C"

    def test_h_adds_top_form_and_grading_element(self):
        lprime = build_Lprime("H", 5)
        assert lprime.table.dim == 32
        assert [lprime.table.labels[k] for k in lprime.outer] == ["D_H(ω)", "C"]
        assert check_super_jacobi(lprime.table).passed

    def test_unknown(self):
        with pytest.raises(FamilyError):
            build_Lprime("Htilde", 4)


class TestHamiltonian:
    def test_prime_index(self):
        assert [prime_index(i, 5) for i in range(1, 6)] == [3, 4, 1, 2, 5]
        with pytest.raises(ValueError):
            prime_index(0, 4)

    @pytest.mark.parametrize("n", [4, 5])
    def test_hamiltonian_fields_are_divergence_free(self, n):
        for monomial in basis(n):
            assert not divergence(D_H(GrassmannPoly({monomial.mask: 1}, n)))

    def test_constants_vanish(self):
        assert not D_H(GrassmannPoly.one(4))

    def test_examples_at_n5(self):
        x1x3 = GrassmannPoly.monomial((1, 3), 5)
        x1x2 = GrassmannPoly.monomial((1, 2), 5)
        assert D_H(x1x3) == SuperVectorField.term((3,), 3, 5) - SuperVectorField.term((1,), 1, 5)
        assert D_H(x1x2) == SuperVectorField.term((2,), 3, 5) - SuperVectorField.term((1,), 4, 5)

    def test_bracket_of_hamiltonian_fields_is_hamiltonian(self):
        monomials = [GrassmannPoly({monomial.mask: 1}, 5) for monomial in basis(5)]
        fields = [D_H(f) for f in monomials]
        for f, field_f in zip(monomials, fields):
            for g, field_g in zip(monomials, fields):
                assert vf_bracket(field_f, field_g) == D_H(apply(field_f, g))


def test_s4_is_closed_under_the_bracket():
    table = build_S(4)
    for left in table.basis:
        assert not divergence(left)
        for right in table.basis:
            assert not divergence(vf_bracket(left, right))


def test_twisted_generators_bracket_into_degree_n_minus_2():
    twist = GrassmannPoly.one(4) - GrassmannPoly.monomial((1, 2, 3, 4), 4)
    first = SuperVectorField.derivation(1, 4).multiply_left(twist)
    second = SuperVectorField.derivation(2, 4).multiply_left(twist)
    bracket = vf_bracket(first, second)
    assert bracket == SuperVectorField.term((1, 3, 4), 1, 4) - SuperVectorField.term((2, 3, 4), 2, 4)
    assert bracket.degree == 2
    assert not divergence(bracket)


class TestEpsilonLift:
    @pytest.mark.parametrize("family, n", [("W", 3), ("S", 3), ("S", 4), ("Stilde", 4), ("H", 4), ("H", 5)])
    def test_lift_projects_back_to_every_root(self, family, n):
        project = epsilon_projection(family, n)
        for weight in expected_roots(family, n):
            for degree in (-1, 0, 1, 2):
                assert project(epsilon_lift(family, n, weight, degree)) == weight

    @pytest.mark.parametrize(
        "epsilon, degree",
        [((-1, 0, 0), -1), ((1, 1, -1), 1), ((1, -1, 0), 0), ((0, 1, -1), 0)],
    )
    def test_special_lift_recovers_the_epsilon_weight(self, epsilon, degree):
        weight = epsilon_projection("S", 3)(epsilon)
        assert epsilon_lift("S", 3, weight, degree) == epsilon

    def test_twisted_level_is_read_mod_n(self):
        # (1 − ω)∂1 in Stilde(4) has the ε-weight of ∂1
        weight = epsilon_projection("Stilde", 4)((-1, 0, 0, 0))
        assert epsilon_lift("Stilde", 4, weight, 3) == (-1, 0, 0, 0)
        assert epsilon_lift("Stilde", 4, weight, -1) == (-1, 0, 0, 0)

    def test_hamiltonian_coordinates(self):
        assert epsilon_lift("H", 5, Weight((1, -1)), 0) == (0, 0, 1, -1, 0)

    def test_unknown_family(self):
        with pytest.raises(FamilyError):
            epsilon_lift("K", 3, Weight((0, 0)), 0)
