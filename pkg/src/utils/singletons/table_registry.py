import logging
import os

from src.algebra.families import FAMILIES, FamilySpec, LprimeTable, build_family, build_Lprime
from src.algebra.superfields import AlgebraTable
from src.algebra.table_io import export_table, load_table
from src.utils.singletons.singleton_meta import SingletonMeta


class TableRegistry(metaclass=SingletonMeta):
    """
    Provides centralized access to structure-constant tables.
    Implements caching so each family is constructed once per process,
    and keeps exported tables under the output directory.
    """

    def __init__(self):
        self._tables: dict[tuple[str, int, bool], AlgebraTable] = {}
        self._lprimes: dict[tuple[str, int], LprimeTable] = {}
        self._files: dict[str, AlgebraTable] = {}
        self._logger = logging.getLogger(__name__)

    def get_table(self, spec: FamilySpec) -> AlgebraTable:
        key = (spec.family, spec.n, spec.lprime)
        if key in self._tables:
            self._logger.debug("Table %s served from cache", spec.label)
            return self._tables[key]
        self._logger.info("Constructing %s", spec.label)
        table = build_family(spec)
        self._tables[key] = table
        return table

    def get_lprime(self, family: str, n: int) -> LprimeTable:
        key = (family, n)
        if key not in self._lprimes:
            lprime = build_Lprime(family, n)
            if family in ("W", "Stilde"):
                # L′ = L: share the cached table
                self._tables.setdefault((family, n, False), lprime.table)
            self._lprimes[key] = lprime
        return self._lprimes[key]

    def lprime_for(self, table: AlgebraTable) -> LprimeTable | None:
        """
        L′ for a table of one of the four families. W and Stilde use the table
        itself, so a loaded (possibly altered) table is compared with itself.
        """
        if table.family not in FAMILIES:
            return None
        if table.family in ("W", "Stilde"):
            return LprimeTable(table, tuple(range(table.dim)))
        lprime = self.get_lprime(table.family, table.n)
        if len(lprime.embedding) != table.dim:
            self._logger.warning("Loaded %s(%d) does not match the dimension of its L′", table.family, table.n)
            return None
        return lprime

    def load(self, path: str) -> AlgebraTable:
        path = os.path.abspath(path)
        if path not in self._files:
            self._files[path] = load_table(path)
        return self._files[path]

    def export(self, table: AlgebraTable, out_dir: str, file_name: str | None = None) -> str:
        tables_dir = os.path.join(out_dir, "tables")
        os.makedirs(tables_dir, exist_ok=True)
        file_name = file_name or f"{table.family}_{table.n}.tbl"
        return export_table(table, os.path.join(tables_dir, file_name))
