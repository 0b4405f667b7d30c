import pytest

from src.algebra.families import build_H, build_S, build_W
from src.algebra.superfields import AlgebraTable


def sl2_table() -> AlgebraTable:
    """
    sl(2) with basis e, h, f.
    """
    structure = {
        (1, 0): {0: 2},
        (0, 1): {0: -2},
        (1, 2): {2: -2},
        (2, 1): {2: 2},
        (0, 2): {1: 1},
        (2, 0): {1: -1},
    }
    return AlgebraTable.from_structure_constants(3, structure, cartan_indices=(1,), family="sl2", labels=["e", "h", "f"])


def with_central_element(table: AlgebraTable) -> AlgebraTable:
    """
    table ⊕ ℂz, z central and even of degree 0.
    """
    return AlgebraTable(
        f"{table.family}+z",
        table.n,
        table.parity + (0,),
        table.zdegree + (0,),
        table.structure,
        None,
        (),
        (),
        table.labels + ("z",),
    )


@pytest.fixture(scope="session")
def w2() -> AlgebraTable:
    return build_W(2)


@pytest.fixture(scope="session")
def w3() -> AlgebraTable:
    return build_W(3)


@pytest.fixture(scope="session")
def s3() -> AlgebraTable:
    return build_S(3)


@pytest.fixture(scope="session")
def h5() -> AlgebraTable:
    return build_H(5)


@pytest.fixture(scope="session")
def sl2() -> AlgebraTable:
    return sl2_table()


@pytest.fixture(scope="session")
def abelian2() -> AlgebraTable:
    return AlgebraTable.from_structure_constants(2, {}, family="abelian")


@pytest.fixture(scope="session")
def w2_central(w2) -> AlgebraTable:
    return with_central_element(w2)
