import logging
import os
from fractions import Fraction

from src.algebra.superfields import AlgebraTable, Weight, exact
from src.utils.exceptions import TableFormatError

FORMAT_VERSION = 1
MAGIC = "superbider-table"

logger = logging.getLogger(__name__)


def _rational(text: str) -> int | Fraction:
    try:
        return exact(Fraction(text))
    except (ValueError, ZeroDivisionError) as error:
        raise TableFormatError(f"Invalid rational {text!r}") from error


def _integer(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError as error:
        raise TableFormatError(f"Invalid {what} {text!r}") from error


def dump_table(table: AlgebraTable) -> str:
    """
    Serialize a table to the versioned text format.

    Header lines carry family, n, the degree modulus and the Cartan indices;
    one `element` line per basis vector carries parity, degree, weight and
    label; one record per nonzero constant follows as `a b k num den`.
    """
    lines = [
        f"{MAGIC} {FORMAT_VERSION}",
        f"family {table.family}",
        f"n {table.n}",
        f"dim {table.dim}",
        f"degree_modulus {table.degree_modulus or 0}",
        "cartan " + " ".join(str(h) for h in table.cartan_indices),
    ]
    for k in range(table.dim):
        weight = ",".join(str(value) for value in table.weights[k].coords) or "-"
        lines.append(f"element {k} {table.parity[k]} {table.zdegree[k]} {weight} {table.labels[k]}")
    lines.append("constants")
    for (a, b) in sorted(table.structure):
        for k, value in sorted(table.structure[(a, b)].items()):
            value = Fraction(value)
            lines.append(f"{a} {b} {k} {value.numerator} {value.denominator}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> AlgebraTable:
    lines = [line.rstrip("\n") for line in text.splitlines() if line.strip()]
    if not lines:
        raise TableFormatError("Empty structure-constant file")

    head = lines[0].split()
    if len(head) != 2 or head[0] != MAGIC:
        raise TableFormatError(f"Missing '{MAGIC}' header")
    if _integer(head[1], "format version") != FORMAT_VERSION:
        raise TableFormatError(f"Unsupported format version {head[1]}")

    header: dict[str, str] = {}
    cursor = 1
    for key in ("family", "n", "dim", "degree_modulus", "cartan"):
        if cursor >= len(lines):
            raise TableFormatError(f"Missing header field '{key}'")
        name, _, value = lines[cursor].partition(" ")
        if name != key:
            raise TableFormatError(f"Expected header field '{key}', found '{name}'")
        header[key] = value.strip()
        cursor += 1

    n = _integer(header["n"], "n")
    dim = _integer(header["dim"], "dim")
    modulus = _integer(header["degree_modulus"], "degree modulus")
    cartan = [_integer(token, "Cartan index") for token in header["cartan"].split()]
    if any(not 0 <= h < dim for h in cartan):
        raise TableFormatError("Cartan index out of range")

    parity, zdegree, weights, labels = [], [], [], []
    for expected in range(dim):
        if cursor >= len(lines):
            raise TableFormatError(f"Missing element line {expected}")
        fields = lines[cursor].split(maxsplit=5)
        if len(fields) < 5 or fields[0] != "element" or _integer(fields[1], "element index") != expected:
            raise TableFormatError(f"Malformed element line: {lines[cursor]!r}")
        parity.append(_integer(fields[2], "parity"))
        zdegree.append(_integer(fields[3], "degree"))
        coords = () if fields[4] == "-" else tuple(_rational(token) for token in fields[4].split(","))
        if len(coords) != len(cartan):
            raise TableFormatError(f"Weight of element {expected} has {len(coords)} coordinates")
        weights.append(Weight(coords))
        labels.append(fields[5] if len(fields) > 5 else f"e{expected}")
        cursor += 1

    if cursor >= len(lines) or lines[cursor] != "constants":
        raise TableFormatError("Missing 'constants' section")
    cursor += 1

    structure: dict[tuple[int, int], dict[int, int | Fraction]] = {}
    while cursor < len(lines) and lines[cursor] != "end":
        fields = lines[cursor].split()
        if len(fields) != 5:
            raise TableFormatError(f"Malformed constant record: {lines[cursor]!r}")
        a, b, k, numerator, denominator = (_integer(token, "constant field") for token in fields)
        if not all(0 <= index < dim for index in (a, b, k)):
            raise TableFormatError(f"Constant record out of range: {lines[cursor]!r}")
        if denominator <= 0:
            raise TableFormatError(f"Non-positive denominator: {lines[cursor]!r}")
        coefficients = structure.setdefault((a, b), {})
        if k in coefficients:
            raise TableFormatError(f"Duplicate constant record: {lines[cursor]!r}")
        coefficients[k] = exact(Fraction(numerator, denominator))
        cursor += 1
    if cursor >= len(lines):
        raise TableFormatError("Missing 'end' marker")

    return AlgebraTable(
        header["family"],
        n,
        parity,
        zdegree,
        structure,
        weights,
        cartan,
        (),
        labels,
        modulus or None,
    )


def export_table(table: AlgebraTable, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dump_table(table))
    logger.debug("Exported %s(%d) structure constants to %s", table.family, table.n, path)
    return path


def load_table(path: str) -> AlgebraTable:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as error:
        raise TableFormatError(f"Cannot read structure-constant file {path}: {error}") from error
    table = parse_table(text)
    logger.debug("Loaded %s(%d) with dim %d from %s", table.family, table.n, table.dim, path)
    return table
