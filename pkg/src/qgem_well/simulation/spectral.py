# Standard Library
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

# Third Party
import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

# First Party
from qgem_well.constants import (
    DENSE_DIMENSION_LIMIT,
    EIGSH_ATTEMPTS,
    EIGSH_TOLERANCE,
    RESIDUAL_TOLERANCE,
    SYMMETRY_TOLERANCE,
    TAIL_FRACTION,
    TAIL_WEIGHT_TOLERANCE,
)
from qgem_well.exceptions import ConfigurationError, InvalidParameterError, LabelingError, NumericError
from qgem_well.schema.scaled_params import ScaledParams
from qgem_well.schema.sector import Sector
from qgem_well.simulation.quadrature import JTable, interaction_block, rounded_delta
from qgem_well.simulation.sine_basis import free_sector_levels, level_numbers, sector_dimension, sector_pairs

logger = logging.getLogger(__name__)

SECTOR_ORDER = (Sector.SYMMETRIC, Sector.ANTISYMMETRIC)


@dataclass(frozen=True)
class SectorBlock:
    sector: Sector
    nmax: int
    basis_pairs: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return int(self.basis_pairs.shape[0])

    def coefficient_matrix(self, vector: np.ndarray) -> np.ndarray:
        """Expand a sector-basis vector into the nmax x nmax product-basis coefficients a_ij."""
        a = np.zeros((self.nmax, self.nmax))
        rows, cols = self.basis_pairs[:, 0] - 1, self.basis_pairs[:, 1] - 1
        np.add.at(a, (rows, cols), self.norms * vector)
        np.add.at(a, (cols, rows), self.sector.sign * self.norms * vector)
        return a


@dataclass(frozen=True)
class Level:
    energy: float
    coefficients: np.ndarray = field(repr=False)
    sector: Sector
    sector_rank: int
    residual: float
    tail_weight: float
    free_label: tuple[int, int] | None = None

    @property
    def converged(self) -> bool:
        return self.residual <= RESIDUAL_TOLERANCE and self.tail_weight <= TAIL_WEIGHT_TOLERANCE

    @property
    def free_energy(self) -> float:
        if self.free_label is None:
            raise LabelingError("level has no free label", sector=self.sector.value)
        n1, n2 = self.free_label
        return 0.5 * (n1 * n1 + n2 * n2)

    @property
    def energy_shift(self) -> float:
        return self.energy - self.free_energy


@dataclass(frozen=True)
class EigenSolution:
    scaled: ScaledParams
    levels: tuple[Level, ...]

    @property
    def ground(self) -> Level:
        return self.levels[0]

    def energies(self) -> np.ndarray:
        return np.array([level.energy for level in self.levels])


def _check_table(s: ScaledParams, t: JTable, nmax: int):
    if abs(t.delta - rounded_delta(s.delta)) > 1e-12 * max(1.0, s.delta):
        raise ConfigurationError(f"J table was built for delta={t.delta}, parameters ask for delta={s.delta}")
    if t.pmax < 2 * nmax:
        raise ConfigurationError(f"J table pmax={t.pmax} is too small for nmax={nmax} (needs {2 * nmax})")


def assemble_sector(s: ScaledParams, t: JTable, sector: Sector) -> SectorBlock:
    """
        Hamiltonian block of one exchange sector in E0 units. Basis states are (|ij> +- |ji>)/sqrt(2)
        for i < j and |ii> in the symmetric sector, so with c_ij = 1/sqrt(2) (i != j) or 1/2 (i == j)
        the element is 2 c_ij c_kl [V(ij,kl) +- V(ij,lk)] plus the kinetic diagonal (i^2 + j^2)/2.
    :param s:
        Scaled parameters
    :param t:
        J table for s.delta with pmax >= 2 nmax
    :param sector:
        Exchange sector
    :return: SectorBlock
    """
    _check_table(s, t, s.nmax)
    pairs = np.array(sector_pairs(s.nmax, sector), dtype=np.int64).reshape(-1, 2)
    i, j = pairs[:, 0], pairs[:, 1]
    norms = np.where(i == j, 0.5, 1.0 / math.sqrt(2.0))
    if pairs.shape[0] == 0:
        return SectorBlock(sector=sector, nmax=s.nmax, basis_pairs=pairs, norms=norms, matrix=np.zeros((0, 0)))

    direct = interaction_block(i, j, i, j, t, s.gamma)
    exchanged = interaction_block(i, j, j, i, t, s.gamma)
    matrix = 2.0 * np.outer(norms, norms) * (direct + sector.sign * exchanged)
    matrix = 0.5 * (matrix + matrix.T)
    matrix[np.diag_indices_from(matrix)] += 0.5 * (i * i + j * j)
    return SectorBlock(sector=sector, nmax=s.nmax, basis_pairs=pairs, norms=norms, matrix=matrix)


def _lanczos_lowest(block: SectorBlock, k: int) -> tuple[np.ndarray, np.ndarray]:
    dim = block.dim
    start = np.random.default_rng(dim).standard_normal(dim)
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(EIGSH_ATTEMPTS),
            retry=retry_if_exception_type(ArpackNoConvergence),
            reraise=True,
        ):
            with attempt:
                attempt_number = attempt.retry_state.attempt_number
                ncv = min(dim, max(2 * k + 1, 20) * attempt_number)
                logger.debug(f"{block.sector.value}: Lanczos with ncv={ncv}, attempt {attempt_number}")
                values, vectors = eigsh(block.matrix, k=k, which="SA", ncv=ncv, tol=EIGSH_TOLERANCE, v0=start)
    except ArpackNoConvergence as error:
        raise NumericError(
            f"iterative eigensolver did not converge for the lowest {k} states after {EIGSH_ATTEMPTS} attempts",
            sector=block.sector.value,
            tolerance=EIGSH_TOLERANCE,
        ) from error
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def solve_sector(block: SectorBlock, k: int) -> tuple[np.ndarray, np.ndarray]:
    """
        Lowest k eigenpairs of one block: dense divide-and-conquer up to DENSE_DIMENSION_LIMIT,
        implicitly restarted Lanczos above it
    :return: (energies ascending, sector-basis eigenvectors as columns)
    """
    k = min(k, block.dim)
    if k == 0:
        return np.zeros(0), np.zeros((block.dim, 0))
    if block.dim <= DENSE_DIMENSION_LIMIT or k >= block.dim - 1:
        logger.debug(f"{block.sector.value}: dense solve, dim={block.dim}, k={k}")
        return eigh(block.matrix, subset_by_index=[0, k - 1], driver="evr")
    logger.debug(f"{block.sector.value}: iterative solve, dim={block.dim}, k={k}")
    return _lanczos_lowest(block, k)


def _tail_weight(a: np.ndarray) -> float:
    probabilities = np.sum(a * a, axis=1)
    tail = max(1, math.ceil(TAIL_FRACTION * probabilities.size))
    return float(np.sum(probabilities[-tail:]))


def _fix_sign(vector: np.ndarray) -> np.ndarray:
    return -vector if vector[np.argmax(np.abs(vector))] < 0 else vector


def _near_tie_order(candidates: list[tuple]) -> list[tuple]:
    """Degenerate energies from different sectors list the symmetric state first."""
    ordered = list(candidates)
    for index in range(1, len(ordered)):
        previous, current = ordered[index - 1], ordered[index]
        tie = abs(current[0] - previous[0]) <= SYMMETRY_TOLERANCE * max(1.0, abs(current[0]))
        if tie and current[1] < previous[1]:
            ordered[index - 1], ordered[index] = current, previous
    return ordered


def solve_lowest(s: ScaledParams, t: JTable, k: int, workers: int = 1) -> EigenSolution:
    """
        Lowest k two-particle eigenstates merged across both exchange sectors, sorted by energy,
        with reconstructed coefficient matrices and free labels
    :param s:
        Scaled parameters
    :param t:
        J table matching s.delta
    :param k:
        Number of levels, 1 <= k <= nmax^2
    :param workers:
        Threads used to solve the two sectors side by side
    :return: EigenSolution
    """
    total = sector_dimension(s.nmax, Sector.SYMMETRIC) + sector_dimension(s.nmax, Sector.ANTISYMMETRIC)
    if not 1 <= k <= total:
        raise InvalidParameterError(f"k must lie in [1, {total}] for nmax={s.nmax}, got {k}")
    _check_table(s, t, s.nmax)

    def solve(sector: Sector):
        block = assemble_sector(s, t, sector)
        energies, vectors = solve_sector(block, k)
        return block, energies, vectors

    with ThreadPoolExecutor(max_workers=max(1, min(workers, 2))) as executor:
        solved = list(executor.map(solve, SECTOR_ORDER))

    candidates = []
    for order, (block, energies, vectors) in enumerate(solved):
        for rank in range(energies.size):
            candidates.append((float(energies[rank]), order, rank, block, vectors[:, rank]))
    candidates.sort(key=lambda candidate: (candidate[0], candidate[1], candidate[2]))
    candidates = _near_tie_order(candidates)[:k]

    levels = []
    for energy, _, rank, block, vector in candidates:
        vector = _fix_sign(vector)
        residual = float(np.linalg.norm(block.matrix @ vector - energy * vector))
        a = block.coefficient_matrix(vector)
        levels.append(
            Level(
                energy=energy,
                coefficients=a,
                sector=block.sector,
                sector_rank=rank + 1,
                residual=residual,
                tail_weight=_tail_weight(a),
            )
        )
    for level in levels:
        level.coefficients.setflags(write=False)

    unconverged = [index + 1 for index, level in enumerate(levels) if not level.converged]
    if unconverged:
        logger.debug(
            f"{len(unconverged)} of {k} levels miss the residual/tail tolerance at nmax={s.nmax}, "
            f"first ones: {unconverged[:5]}"
        )
    return label_levels(EigenSolution(scaled=s, levels=tuple(levels)))


def label_levels(sol: EigenSolution) -> EigenSolution:
    """
        The r-th level of a sector inherits the r-th non-interacting pair of that sector
    """
    free = {sector: free_sector_levels(sol.scaled.nmax, sector) for sector in SECTOR_ORDER}
    labelled = []
    for level in sol.levels:
        pairs = free[level.sector]
        if level.sector_rank > len(pairs):
            raise LabelingError(
                f"sector rank {level.sector_rank} exceeds the {len(pairs)} free levels of the sector",
                sector=level.sector.value,
            )
        labelled.append(replace(level, free_label=pairs[level.sector_rank - 1]))
    return replace(sol, levels=tuple(labelled))


def product_hamiltonian(s: ScaledParams, t: JTable, n: int) -> np.ndarray:
    """
        Dense Hamiltonian on the n^2 product states |ij>, row index (i - 1) n + (j - 1)
    """
    if n < 1:
        raise InvalidParameterError(f"basis size must be positive, got {n}")
    _check_table(s, t, n)
    levels = level_numbers(n)
    i, j = np.repeat(levels, n), np.tile(levels, n)
    h = interaction_block(i, j, i, j, t, s.gamma)
    h = 0.5 * (h + h.T)
    h[np.diag_indices_from(h)] += 0.5 * (i * i + j * j)
    return h


def free_hamiltonian(n: int) -> np.ndarray:
    if n < 1:
        raise InvalidParameterError(f"basis size must be positive, got {n}")
    levels = level_numbers(n)
    i, j = np.repeat(levels, n), np.tile(levels, n)
    return np.diag(0.5 * (i * i + j * j).astype(float))
