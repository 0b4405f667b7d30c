import pytest

from src.algebra.table_io import dump_table, export_table, load_table, parse_table
from src.utils.exceptions import TableFormatError


def test_dump_and_parse_preserve_the_table(w2):
    parsed = parse_table(dump_table(w2))
    assert parsed.structure == w2.structure
    assert parsed.parity == w2.parity
    assert parsed.zdegree == w2.zdegree
    assert parsed.weights == w2.weights
    assert parsed.cartan_indices == w2.cartan_indices
    assert parsed.labels == w2.labels
    assert parsed.degree_modulus is None


def test_dump_is_deterministic(w2):
    assert dump_table(w2) == dump_table(parse_table(dump_table(w2)))


def test_header(sl2):
    lines = dump_table(sl2).splitlines()
    assert lines[:6] == ["superbider-table 1", "family sl2", "n 0", "dim 3", "degree_modulus 0", "cartan 1"]
    assert lines[6] == "element 0 0 0 2 e"
    assert lines[-1] == "end"


def test_export_and_load(tmp_path, sl2):
    path = export_table(sl2, str(tmp_path / "tables" / "sl2.tbl"))
    loaded = load_table(path)
    assert loaded.structure == sl2.structure
    assert loaded.weights == sl2.weights


def test_missing_file(tmp_path):
    with pytest.raises(TableFormatError):
        load_table(str(tmp_path / "absent.tbl"))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda text: "",
        lambda text: text.replace("superbider-table 1", "superbider-table 2"),
        lambda text: text.replace("family sl2\n", ""),
        lambda text: text.replace("cartan 1", "cartan 7"),
        lambda text: text.replace("element 2", "element 5"),
        lambda text: text.replace("constants\n", ""),
        lambda text: text.replace("\nend\n", "\n"),
        lambda text: text.replace("0 2 1 1 1", "0 2 1 1 0"),
        lambda text: text.replace("0 2 1 1 1", "0 2 9 1 1"),
        lambda text: text.replace("0 2 1 1 1", "0 2 1 1 1\n0 2 1 1 1"),
        lambda text: text.replace("0 2 1 1 1", "0 2 1 one 1"),
    ],
)
def test_malformed_files(sl2, mutate):
    with pytest.raises(TableFormatError):
        parse_table(mutate(dump_table(sl2)))
