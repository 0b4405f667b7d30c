from src.algebra.families import build_Lprime
from src.linalg.sparse import nullspace
from src.services.solvers.dersolve import (
    ad_injectivity,
    assemble_der_system,
    classify_derivations,
    solve_derivations,
)


def test_sl2_derivations(sl2):
    assert solve_derivations(sl2, 0).dimension == 3
    assert solve_derivations(sl2, 1).dimension == 0


def test_abelian_derivations_are_gl2(abelian2):
    matrix, unknowns = assemble_der_system(abelian2, 0)
    assert len(unknowns) == 4
    assert nullspace(matrix).dimension == 4
    assert solve_derivations(abelian2, 0).dimension == 4


def test_blocked_solver_matches_full_system(w2):
    for parity in (0, 1):
        matrix, _ = assemble_der_system(w2, parity)
        assert solve_derivations(w2, parity).dimension == nullspace(matrix).dimension


def test_every_derivation_satisfies_the_leibniz_rule(w2):
    for parity in (0, 1):
        for vector in solve_derivations(w2, parity).basis:
            D = {}
            for (k, m), value in vector.items():
                D.setdefault(k, {})[m] = value
            for a in range(w2.dim):
                for b in range(w2.dim):
                    lhs = {}
                    for k, c in w2.constants(a, b).items():
                        for m, value in D.get(k, {}).items():
                            lhs[m] = lhs.get(m, 0) + c * value
                    sign = -1 if parity and w2.parity[a] else 1
                    rhs = w2.bracket(D.get(a, {}), {b: 1})
                    for m, value in w2.bracket({a: 1}, D.get(b, {})).items():
                        rhs[m] = rhs.get(m, 0) + sign * value
                    difference = {m: lhs.get(m, 0) - rhs.get(m, 0) for m in set(lhs) | set(rhs)}
                    assert not any(difference.values())


def test_w3_derivations_are_inner(w3):
    solutions = [solve_derivations(w3, parity) for parity in (0, 1)]
    classification = classify_derivations(solutions, w3, build_Lprime("W", 3))
    assert classification.dimension == 24
    assert classification.derivations_inner
    assert classification.outer == []
    assert classification.passed


def test_s3_has_the_grading_derivation(s3):
    solutions = [solve_derivations(s3, parity) for parity in (0, 1)]
    classification = classify_derivations(solutions, s3, build_Lprime("S", 3))
    assert classification.dimension == 18
    assert classification.lprime_dimension == 18
    assert classification.outer == ["C"]
    assert classification.passed


def test_single_parity_classification(s3):
    classification = classify_derivations([solve_derivations(s3, 1)], s3, build_Lprime("S", 3))
    assert classification.ad_injective
    assert classification.passed


def test_ad_injectivity():
    assert ad_injectivity(build_Lprime("S", 3)) == (18, 18)
