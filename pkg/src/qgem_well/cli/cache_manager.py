# Standard Library
import logging
import os
import tempfile
import threading
from collections.abc import Callable
from pathlib import Path

# Third Party
from packaging.version import InvalidVersion, Version

# First Party
from qgem_well.constants import JTABLE_DELTA_DECIMALS, JTABLE_FORMAT_VERSION
from qgem_well.simulation.quadrature import JTable, build_table, rounded_delta

logger = logging.getLogger(__name__)

TableBuilder = Callable[..., JTable]


class JTableCache:
    """
        On-disk J table store keyed by (delta, accuracy, format version). A stored table with a
        larger pmax also serves smaller requests through truncation.
    """

    def __init__(self, cache_dir: str | Path, workers: int = 1, builder: TableBuilder | None = None):
        self.cache_dir = Path(cache_dir)
        self.workers = workers
        self.builder = builder or build_table
        self.hits = 0
        self.misses = 0
        self._guard = threading.Lock()
        self._key_locks: dict[str, threading.Lock] = {}

    @staticmethod
    def key_builder(delta: float, accuracy: float, version: str = JTABLE_FORMAT_VERSION) -> str:
        cache_key = f"jtable_d{rounded_delta(delta):.{JTABLE_DELTA_DECIMALS}f}_a{accuracy:.6e}_v{version}.bin"
        logger.debug(f"J table cache key: {cache_key}")
        return cache_key

    def path_for(self, delta: float, accuracy: float) -> Path:
        return self.cache_dir / self.key_builder(delta, accuracy)

    def _lock_for(self, key: str) -> threading.Lock:
        with self._guard:
            return self._key_locks.setdefault(key, threading.Lock())

    def _read(self, path: Path) -> JTable | None:
        try:
            return JTable.from_bytes(path.read_bytes())
        except (OSError, ValueError, UnicodeDecodeError) as error:
            logger.warning(f"Corrupt J table cache file {path} ({error}), it will be rebuilt and overwritten")
            return None

    def lookup(self, delta: float, pmax: int, accuracy: float) -> JTable | None:
        """
            Cached table for the request, truncated to pmax, or None on a miss
        :param delta:
            Scaled separation, compared after rounding to JTABLE_DELTA_DECIMALS
        :param pmax:
            Requested largest frequency; any cached pmax at least this large is a hit
        :param accuracy:
            Quadrature accuracy, must match exactly
        :return: JTable or None
        """
        path = self.path_for(delta, accuracy)
        if not path.is_file():
            return None
        table = self._read(path)
        if table is None:
            return None
        try:
            same_version = Version(table.version) == Version(JTABLE_FORMAT_VERSION)
        except InvalidVersion:
            same_version = False
        if not same_version or table.delta != rounded_delta(delta) or table.accuracy != accuracy:
            logger.info(f"J table cache file {path.name} does not match the request, rebuilding")
            return None
        if table.pmax < pmax:
            logger.info(f"Cached J table holds pmax={table.pmax}, pmax={pmax} requested, rebuilding")
            return None
        return table.truncated(pmax)

    def store(self, table: JTable) -> Path:
        """Write atomically, a concurrent reader sees either the old or the new file."""
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self.path_for(table.delta, table.accuracy)
        descriptor, temporary = tempfile.mkstemp(dir=self.cache_dir, prefix=".jtable_", suffix=".tmp")
        try:
            with os.fdopen(descriptor, "wb") as temporary_file:
                temporary_file.write(table.to_bytes())
            os.replace(temporary, path)
        except OSError:
            Path(temporary).unlink(missing_ok=True)
            raise
        logger.info(f"Stored J table delta={table.delta:g} pmax={table.pmax} in {path}")
        return path

    def get_or_build(self, delta: float, pmax: int, accuracy: float) -> JTable:
        key = self.key_builder(delta, accuracy)
        with self._lock_for(key):
            table = self.lookup(delta, pmax, accuracy)
            if table is not None:
                with self._guard:
                    self.hits += 1
                logger.info(f"J table cache hit for delta={delta:g}, pmax={pmax}")
                return table
            with self._guard:
                self.misses += 1
            logger.info(f"J table cache miss for delta={delta:g}, pmax={pmax}")
            table = self.builder(delta, pmax, accuracy, workers=self.workers)
            self.store(table)
            return table

    def __call__(self, delta: float, pmax: int, accuracy: float) -> JTable:
        return self.get_or_build(delta, pmax, accuracy)
