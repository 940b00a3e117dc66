"""
Cosine integrals J(p, q; delta) = int_0^1 int_0^1 cos(p pi u1) cos(q pi u2) / (u1 + u2 + delta) du1 du2.

Every gravitational matrix element in the sine basis reduces to four table entries, so a
(2 nmax + 1)^2 table replaces O(nmax^4) two-dimensional integrals.
"""

# Standard Library
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

# Third Party
import numpy as np
from numpy.polynomial.legendre import leggauss
from packaging.version import Version

# First Party
from qgem_well.constants import (
    DEFAULT_QUADRATURE_ACCURACY,
    JTABLE_CACHE_MAGIC,
    JTABLE_DELTA_DECIMALS,
    JTABLE_FORMAT_VERSION,
    MAX_NODES_PER_PANEL,
    MAX_QUADRATURE_ACCURACY,
    MAX_REFINEMENTS,
    MIN_NODES_PER_HALF_PERIOD,
    MIN_NODES_PER_PANEL,
    TABLE_ROW_BLOCK,
)
from qgem_well.exceptions import InvalidParameterError, NumericError, QuadratureDomainError, TableBoundsError

logger = logging.getLogger(__name__)

# Row chunk used when gathering interaction blocks, bounds temporary memory at nmax=100
_GATHER_CHUNK = 512


@dataclass(frozen=True)
class JTable:
    delta: float
    pmax: int
    accuracy: float
    values: np.ndarray = field(repr=False)
    version: str = JTABLE_FORMAT_VERSION

    def __post_init__(self):
        if self.values.shape != (self.pmax + 1, self.pmax + 1):
            raise InvalidParameterError(
                f"table values have shape {self.values.shape}, expected {(self.pmax + 1, self.pmax + 1)}"
            )
        self.values.setflags(write=False)

    def entry(self, p: int, q: int) -> float:
        if not (0 <= p <= self.pmax and 0 <= q <= self.pmax):
            raise TableBoundsError(f"J({p},{q}) is outside the table (pmax={self.pmax})")
        return float(self.values[p, q])

    def truncated(self, pmax: int) -> "JTable":
        if pmax > self.pmax:
            raise TableBoundsError(f"cannot truncate a pmax={self.pmax} table to pmax={pmax}")
        if pmax == self.pmax:
            return self
        return JTable(
            delta=self.delta,
            pmax=pmax,
            accuracy=self.accuracy,
            values=np.array(self.values[: pmax + 1, : pmax + 1]),
            version=self.version,
        )

    def header(self) -> str:
        return f"{JTABLE_CACHE_MAGIC} {self.version} {self.delta!r} {self.pmax} {self.accuracy!r}\n"

    def to_bytes(self) -> bytes:
        """Header line followed by the row-major upper triangle as little-endian float64."""
        rows, cols = np.triu_indices(self.pmax + 1)
        payload = np.ascontiguousarray(self.values[rows, cols], dtype="<f8").tobytes()
        return self.header().encode("ascii") + payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "JTable":
        header, separator, payload = data.partition(b"\n")
        if not separator:
            raise ValueError("missing table header")
        parts = header.decode("ascii").split()
        if len(parts) != 5 or parts[0] != JTABLE_CACHE_MAGIC:
            raise ValueError(f"unrecognised table header: {header[:80]!r}")
        version, delta, pmax, accuracy = Version(parts[1]), float(parts[2]), int(parts[3]), float(parts[4])
        rows, cols = np.triu_indices(pmax + 1)
        upper = np.frombuffer(payload, dtype="<f8")
        if upper.size != rows.size:
            raise ValueError(f"table payload holds {upper.size} values, expected {rows.size}")
        values = np.zeros((pmax + 1, pmax + 1))
        values[rows, cols] = upper
        values[cols, rows] = upper
        return cls(delta=delta, pmax=pmax, accuracy=accuracy, values=values, version=str(version))


def rounded_delta(delta: float) -> float:
    return round(delta, JTABLE_DELTA_DECIMALS)


def closed_form_j00(delta: float) -> float:
    """J(0, 0; delta) = f(2 + delta) - 2 f(1 + delta) + f(delta) with f(s) = s ln s."""
    if delta <= 0:
        raise QuadratureDomainError(f"delta must be positive, got {delta}")

    def f(s: float) -> float:
        return s * math.log(s)

    return f(2.0 + delta) - 2.0 * f(1.0 + delta) + f(delta)


def nodes_per_panel(accuracy: float) -> int:
    nodes = math.ceil(-math.log10(accuracy)) + 8
    return int(min(max(nodes, MIN_NODES_PER_PANEL, MIN_NODES_PER_HALF_PERIOD), MAX_NODES_PER_PANEL))


def panel_breakpoints(delta: float, frequency: int) -> np.ndarray:
    """
        Panel edges on [0, 1]: uniform panels no wider than 2/frequency so every half-period of
        cos(frequency pi u) gets at least half a panel of nodes, merged with a geometric grading
        delta * 2^k toward the origin where 1/(u1 + u2 + delta) steepens
    """
    uniform_panels = max(1, math.ceil(max(frequency, 1) / 2))
    edges = [np.linspace(0.0, 1.0, uniform_panels + 1)]
    graded = []
    edge = delta
    while edge < 1.0:
        graded.append(edge)
        edge *= 2.0
    if graded:
        edges.append(np.asarray(graded))
    merged = np.unique(np.concatenate(edges))
    keep = np.concatenate(([True], np.diff(merged) > 1e-12))
    merged = merged[keep]
    merged[-1] = 1.0
    return merged


def gauss_legendre_rule(breakpoints: np.ndarray, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """
        Composite Gauss-Legendre rule with the given number of nodes on every panel
    :param breakpoints:
        Increasing panel edges
    :param nodes:
        Nodes per panel
    :return: (abscissae, weights)
    """
    reference_x, reference_w = leggauss(nodes)
    left, right = breakpoints[:-1, None], breakpoints[1:, None]
    half = 0.5 * (right - left)
    x = (0.5 * (left + right) + half * reference_x[None, :]).ravel()
    w = (half * reference_w[None, :]).ravel()
    return x, w


def _tensor_integral(p: int, q: int, delta: float, breakpoints: np.ndarray, nodes: int) -> float:
    x, w = gauss_legendre_rule(breakpoints, nodes)
    kernel = 1.0 / (x[:, None] + x[None, :] + delta)
    left = w * np.cos(p * np.pi * x)
    right = w * np.cos(q * np.pi * x)
    return float(left @ kernel @ right)


def j_entry(p: int, q: int, delta: float, accuracy: float = DEFAULT_QUADRATURE_ACCURACY) -> float:
    """
        Oracle-grade single table entry: the panel count follows max(p, q) and is doubled until
        two successive estimates agree to the requested accuracy
    :param p:
        Cosine frequency along u1
    :param q:
        Cosine frequency along u2
    :param delta:
        Scaled well separation, strictly positive
    :param accuracy:
        Target relative error
    :return: J(p, q; delta)
    """
    if delta <= 0:
        raise QuadratureDomainError(f"delta must be positive, the integrand is singular at the origin (got {delta})")
    if p < 0 or q < 0:
        raise InvalidParameterError(f"frequencies must be non-negative, got p={p}, q={q}")
    nodes = nodes_per_panel(accuracy)
    frequency = max(p, q, 1)
    previous = _tensor_integral(p, q, delta, panel_breakpoints(delta, frequency), nodes)
    for refinement in range(1, MAX_REFINEMENTS + 1):
        current = _tensor_integral(p, q, delta, panel_breakpoints(delta, frequency * 2**refinement), nodes)
        if abs(current - previous) <= accuracy * max(abs(current), 1e-3):
            return current
        previous = current
    raise NumericError(f"J({p},{q};{delta}) did not settle after {MAX_REFINEMENTS} refinements", tolerance=accuracy)


def build_table(
    delta: float,
    pmax: int,
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    workers: int = 1,
) -> JTable:
    """
        Fill the symmetric J table for frequencies 0..pmax.

        One composite rule resolving frequency pmax is shared by all entries, so the table is
        C (W K W) C^T with C the sampled cosines. Rows are processed in fixed blocks, each block
        computing only q >= p, and the upper triangle is mirrored; the result does not depend
        on the number of workers.
    :param delta:
        Scaled well separation
    :param pmax:
        Largest cosine frequency, at least 2 nmax for an nmax basis
    :param accuracy:
        Target relative error, 0 < accuracy <= 1e-6
    :param workers:
        Threads used for the row blocks
    :return: JTable
    """
    if delta <= 0:
        raise QuadratureDomainError(f"delta must be positive, got {delta}")
    if pmax < 2:
        raise InvalidParameterError(f"pmax must be at least 2, got {pmax}")
    if not 0 < accuracy <= MAX_QUADRATURE_ACCURACY:
        raise InvalidParameterError(f"accuracy must lie in (0, {MAX_QUADRATURE_ACCURACY}], got {accuracy}")

    started = time.perf_counter()
    nodes = nodes_per_panel(accuracy)
    x, w = gauss_legendre_rule(panel_breakpoints(delta, pmax), nodes)
    weighted_kernel = (w[:, None] * w[None, :]) / (x[:, None] + x[None, :] + delta)
    cosines = np.cos(np.pi * np.outer(np.arange(pmax + 1), x))
    projected = weighted_kernel @ cosines.T

    starts = list(range(0, pmax + 1, TABLE_ROW_BLOCK))

    def row_block(start: int) -> np.ndarray:
        stop = min(start + TABLE_ROW_BLOCK, pmax + 1)
        return cosines[start:stop] @ projected[:, start:]

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        blocks = list(executor.map(row_block, starts))

    upper = np.zeros((pmax + 1, pmax + 1))
    for start, block in zip(starts, blocks, strict=True):
        stop = start + block.shape[0]
        upper[start:stop, start:] = block
    upper = np.triu(upper)
    values = upper + np.triu(upper, 1).T

    expected = closed_form_j00(delta)
    if abs(values[0, 0] - expected) > max(accuracy, 1e-13) * expected:
        raise NumericError(f"J(0,0;{delta}) = {values[0, 0]!r} misses its closed form {expected!r}", tolerance=accuracy)

    logger.info(
        f"Built J table delta={delta:g} pmax={pmax} with {x.size} nodes per axis "
        f"in {time.perf_counter() - started:.2f}s"
    )
    return JTable(delta=rounded_delta(delta), pmax=pmax, accuracy=accuracy, values=values)


def _check_table_reach(t: JTable, largest: int):
    if largest > t.pmax:
        raise TableBoundsError(f"matrix elements need J up to frequency {largest}, table holds pmax={t.pmax}")


def interaction_element(i: int, j: int, k: int, l: int, t: JTable, gamma: float) -> float:  # noqa: E741
    """
        <i j|V|k l> = -gamma [J(|i-k|,|j-l|) - J(i+k,|j-l|) - J(|i-k|,j+l) + J(i+k,j+l)]
    """
    if min(i, j, k, l) < 1:
        raise TableBoundsError(f"levels start at 1, got ({i},{j},{k},{l})")
    _check_table_reach(t, max(i + k, j + l))
    im, ip, jm, jp = abs(i - k), i + k, abs(j - l), j + l
    return -gamma * (t.entry(im, jm) - t.entry(ip, jm) - t.entry(im, jp) + t.entry(ip, jp))


def interaction_block(
    bra_i: np.ndarray,
    bra_j: np.ndarray,
    ket_k: np.ndarray,
    ket_l: np.ndarray,
    t: JTable,
    gamma: float,
) -> np.ndarray:
    """
        Vectorised interaction_element: entry (a, b) is <bra_i[a] bra_j[a]|V|ket_k[b] ket_l[b]>
    """
    bra_i, bra_j = np.asarray(bra_i, dtype=np.int64), np.asarray(bra_j, dtype=np.int64)
    ket_k, ket_l = np.asarray(ket_k, dtype=np.int64), np.asarray(ket_l, dtype=np.int64)
    if min(bra_i.min(), bra_j.min(), ket_k.min(), ket_l.min()) < 1:
        raise TableBoundsError("levels start at 1")
    _check_table_reach(t, int(max(bra_i.max() + ket_k.max(), bra_j.max() + ket_l.max())))

    table = t.values
    out = np.empty((bra_i.size, ket_k.size))
    for start in range(0, bra_i.size, _GATHER_CHUNK):
        rows = slice(start, start + _GATHER_CHUNK)
        im = np.abs(bra_i[rows, None] - ket_k[None, :])
        ip = bra_i[rows, None] + ket_k[None, :]
        jm = np.abs(bra_j[rows, None] - ket_l[None, :])
        jp = bra_j[rows, None] + ket_l[None, :]
        out[rows] = -gamma * (table[im, jm] - table[ip, jm] - table[im, jp] + table[ip, jp])
    return out
