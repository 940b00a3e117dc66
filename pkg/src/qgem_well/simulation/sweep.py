# Standard Library
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

# Third Party
import numpy as np
from scipy.stats import linregress, spearmanr

# First Party
from qgem_well.constants import DEFAULT_QUADRATURE_ACCURACY
from qgem_well.exceptions import InvalidParameterError, InvalidRangeError, NumericError, QgemError
from qgem_well.schema.entanglement_report import EntanglementReport
from qgem_well.schema.physical_params import PhysicalParams
from qgem_well.schema.scaled_params import ScaledParams
from qgem_well.schema.sweep_rows import ConvergeRow, EntropyRow, GridRow, LevelRow, LogFit, ModeRow, SolveRow
from qgem_well.simulation.entangle import entanglement_report, entropy, mode_probabilities, witness
from qgem_well.simulation.quadrature import JTable, build_table
from qgem_well.simulation.spectral import EigenSolution, solve_lowest
from qgem_well.simulation.units import scale_params

logger = logging.getLogger(__name__)

TableFactory = Callable[[float, int, float], JTable]


@dataclass(frozen=True)
class PointSolution:
    physical: PhysicalParams
    solution: EigenSolution
    reports: tuple[EntanglementReport, ...]

    @property
    def scaled(self) -> ScaledParams:
        return self.solution.scaled


@dataclass(frozen=True)
class CriticalMass:
    mass: float
    entropy: float
    interior: bool


def _ordered_map(function: Callable, items: Sequence, workers: int) -> list:
    """Map over a thread pool, results in input order."""
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))


def _table_for(s: ScaledParams, nmax: int, accuracy: float, table_factory: TableFactory) -> JTable:
    return table_factory(s.delta, 2 * nmax, accuracy)


def solve_point(
    p: PhysicalParams,
    nmax: int,
    k: int,
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    gamma_override: float | None = None,
    n_w: int | None = None,
    table_factory: TableFactory = build_table,
    workers: int = 1,
) -> PointSolution:
    """
        Lowest k eigenstates at one physical point together with an entanglement report per level
    :param p:
        Physical parameters
    :param nmax:
        Basis size per particle
    :param k:
        Number of levels
    :param accuracy:
        J table accuracy
    :param gamma_override:
        Replaces the coupling derived from p, for controls such as gamma = 0
    :param n_w:
        Witness dimension, nmax when omitted
    :param table_factory:
        Source of J tables, build_table or a cache
    :param workers:
        Threads for the sector solves
    :return: PointSolution
    """
    s = scale_params(p, nmax)
    if gamma_override is not None:
        s = s.with_gamma(gamma_override)
    t = _table_for(s, nmax, accuracy, table_factory)
    solution = solve_lowest(s, t, k, workers=workers)
    reports = tuple(entanglement_report(level.coefficients, n_w) for level in solution.levels)
    return PointSolution(physical=p, solution=solution, reports=reports)


def solve_rows(point: PointSolution) -> list[SolveRow]:
    s, p = point.scaled, point.physical
    rows = []
    for index, (level, report) in enumerate(zip(point.solution.levels, point.reports, strict=True), start=1):
        n1, n2 = level.free_label
        rows.append(
            SolveRow(
                level=index,
                energy=level.energy,
                sector=level.sector,
                n1=n1,
                n2=n2,
                energy_shift=level.energy_shift,
                entropy=report.entropy,
                witness=report.witness,
                witness_dimension=report.witness_dimension,
                covariance=report.position.covariance,
                residual=level.residual,
                converged=level.converged,
                delta=s.delta,
                gamma=s.gamma,
                nmax=s.nmax,
                mass=p.mass,
                well_width=p.well_width,
                separation=p.separation,
            )
        )
    return rows


def _level_rows(p: PhysicalParams, solution: EigenSolution, n_w: int | None) -> list[LevelRow]:
    s = solution.scaled
    n_w = s.nmax if n_w is None else n_w
    rows = []
    for index, level in enumerate(solution.levels, start=1):
        n1, n2 = level.free_label
        rows.append(
            LevelRow(
                delta=s.delta,
                level=index,
                energy=level.energy,
                sector=level.sector,
                n1=n1,
                n2=n2,
                energy_shift=level.energy_shift,
                entropy=entropy(level.coefficients),
                witness=witness(level.coefficients, n_w),
                residual=level.residual,
                mass=p.mass,
                well_width=p.well_width,
                separation=p.separation,
                gamma=s.gamma,
                nmax=s.nmax,
            )
        )
    return rows


def distance_sweep(
    p: PhysicalParams,
    deltas: Sequence[float],
    k: int,
    nmax: int,
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    n_w: int | None = None,
    table_factory: TableFactory = build_table,
    workers: int = 1,
) -> list[LevelRow]:
    """
        Lowest k levels along a shrinking separation, one J table per delta. The mass and width
        of p are kept, the separation becomes delta * L at every point.
    """
    if len(deltas) == 0:
        raise InvalidParameterError("the distance sweep needs at least one delta")
    if any(later >= earlier for earlier, later in zip(deltas, deltas[1:], strict=False)):
        raise InvalidRangeError(f"deltas must be strictly descending, got {list(deltas)}")

    def point(delta: float) -> list[LevelRow]:
        logger.debug(f"distance sweep: delta={delta:g}")
        at_delta = p.with_separation(delta * p.well_width)
        try:
            s = scale_params(at_delta, nmax)
            solution = solve_lowest(s, _table_for(s, nmax, accuracy, table_factory), k)
        except NumericError as error:
            raise NumericError(f"distance sweep failed at delta={delta:g}: {error}") from error
        return _level_rows(at_delta, solution, n_w)

    return [row for rows in _ordered_map(point, list(deltas), workers) for row in rows]


def spectrum_shift(
    p: PhysicalParams,
    K: int,  # noqa: N803
    nmax: int,
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    n_w: int | None = None,
    table_factory: TableFactory = build_table,
    workers: int = 1,
) -> list[LevelRow]:
    """
        dE_n = E_n - (n1^2 + n2^2)/2 for the lowest K levels ordered by energy rank across both sectors
    """
    s = scale_params(p, nmax)
    solution = solve_lowest(s, _table_for(s, nmax, accuracy, table_factory), K, workers=workers)
    return _level_rows(p, solution, n_w)


def entropy_spectrum(
    p: PhysicalParams,
    K: int,  # noqa: N803
    nmax: int,
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    n_w: int | None = None,
    table_factory: TableFactory = build_table,
    workers: int = 1,
) -> tuple[list[EntropyRow], LogFit]:
    """
        Entanglement entropy of the lowest K levels and the least-squares fit S = a + b ln n
    """
    if K < 3:
        raise InvalidParameterError(f"the logarithmic fit needs at least 3 levels, got K={K}")
    level_rows = spectrum_shift(p, K, nmax, accuracy, n_w, table_factory, workers)
    rows = [
        EntropyRow(
            level=row.level,
            energy=row.energy,
            entropy=row.entropy,
            witness=row.witness,
            sector=row.sector,
            n1=row.n1,
            n2=row.n2,
            delta=row.delta,
            gamma=row.gamma,
            nmax=row.nmax,
            mass=row.mass,
            well_width=row.well_width,
        )
        for row in level_rows
    ]
    fit = linregress(np.log([row.level for row in rows]), [row.entropy for row in rows])
    log_fit = LogFit(a=float(fit.intercept), b=float(fit.slope), r_squared=float(fit.rvalue**2))
    logger.info(f"entropy spectrum fit: S = {log_fit.a:.6g} + {log_fit.b:.6g} ln n, R^2 = {log_fit.r_squared:.4f}")
    return rows, log_fit


def mass_width_grid(
    masses: Sequence[float],
    widths: Sequence[float],
    d: float,
    nmax: int,
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    n_w: int | None = None,
    base: PhysicalParams | None = None,
    table_factory: TableFactory = build_table,
    workers: int = 1,
) -> list[GridRow]:
    """
        Ground-state entropy and witness over a (mass, width) grid at fixed separation d.
        Rows are ordered by width, then mass; a failing cell becomes an error row.
    :param masses:
        Particle masses in kg
    :param widths:
        Well widths in m, each giving its own delta = d / L and J table
    :param d:
        Separation in m
    :param nmax:
        Basis size per particle
    :param base:
        Supplies the physical constants, the default point when omitted
    :return: list of GridRow
    """
    if len(masses) == 0 or len(widths) == 0:
        raise InvalidParameterError("the mass/width grid needs at least one mass and one width")
    base = base or PhysicalParams(mass=masses[0], well_width=widths[0], separation=d)
    base = base.with_separation(d)

    def table(width: float) -> JTable | str:
        try:
            s = scale_params(base.with_well_width(width), nmax)
            return _table_for(s, nmax, accuracy, table_factory)
        except QgemError as error:
            logger.warning(f"J table for L={width:g} m failed: {error}")
            return str(error)

    tables = dict(zip(widths, _ordered_map(table, list(widths), workers), strict=True))

    def cell(parameters: tuple[float, float]) -> GridRow:
        width, mass = parameters
        cell_params = base.with_well_width(width).with_mass(mass)
        s = scale_params(cell_params, nmax)
        record = {"mass": mass, "well_width": width, "gamma": s.gamma, "delta": s.delta, "nmax": nmax, "separation": d}
        t = tables[width]
        if isinstance(t, str):
            return GridRow(**record, error=t)
        try:
            ground = solve_lowest(s, t, 1).ground
            a = ground.coefficients
            return GridRow(**record, entropy=entropy(a), witness=witness(a, nmax if n_w is None else n_w))
        except (QgemError, np.linalg.LinAlgError) as error:
            logger.warning(f"grid cell m={mass:g} kg, L={width:g} m failed: {error}")
            return GridRow(**record, error=str(error))

    cells = [(width, mass) for width in widths for mass in masses]
    rows = _ordered_map(cell, cells, workers)
    failures = sum(row.failed for row in rows)
    if failures:
        logger.warning(f"{failures} of {len(rows)} grid cells failed")
    return rows


def convergence_study(
    p: PhysicalParams,
    nmaxes: Sequence[int],
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    table_factory: TableFactory = build_table,
    workers: int = 1,
) -> list[ConvergeRow]:
    """
        Ground energy along an increasing nmax ladder. One table at the largest nmax serves every
        rung through truncation; rel_diff compares each rung with the previous one.
    """
    if len(nmaxes) == 0:
        raise InvalidParameterError("the convergence study needs at least one nmax")
    if any(later <= earlier for earlier, later in zip(nmaxes, nmaxes[1:], strict=False)):
        raise InvalidRangeError(f"nmaxes must be strictly increasing, got {list(nmaxes)}")
    largest = scale_params(p, nmaxes[-1])
    full_table = _table_for(largest, nmaxes[-1], accuracy, table_factory)

    def ground_energy(nmax: int) -> float:
        logger.debug(f"convergence study: nmax={nmax}")
        s = largest.with_nmax(nmax)
        return solve_lowest(s, full_table.truncated(2 * nmax), 1).ground.energy

    energies = _ordered_map(ground_energy, list(nmaxes), workers)
    rows = []
    for index, (nmax, energy) in enumerate(zip(nmaxes, energies, strict=True)):
        rel_diff = None if index == 0 else abs(energy - energies[index - 1]) / abs(energy)
        rows.append(
            ConvergeRow(
                nmax=nmax,
                ground_energy=energy,
                rel_diff=rel_diff,
                delta=largest.delta,
                gamma=largest.gamma,
                mass=p.mass,
                well_width=p.well_width,
            )
        )
    return rows


def mode_distribution(
    masses: Sequence[float],
    width: float,
    d: float,
    nmax: int,
    accuracy: float = DEFAULT_QUADRATURE_ACCURACY,
    base: PhysicalParams | None = None,
    table_factory: TableFactory = build_table,
    workers: int = 1,
) -> list[ModeRow]:
    """
        Ground-state mode occupation P_n for each mass at one width; delta, and so the table, is shared
    """
    if len(masses) == 0:
        raise InvalidParameterError("the mode distribution needs at least one mass")
    base = (base or PhysicalParams(mass=masses[0], well_width=width, separation=d)).with_well_width(width)
    base = base.with_separation(d)
    t = _table_for(scale_params(base, nmax), nmax, accuracy, table_factory)

    def distribution(mass: float) -> list[ModeRow]:
        s = scale_params(base.with_mass(mass), nmax)
        probabilities = mode_probabilities(solve_lowest(s, t, 1).ground.coefficients)
        return [
            ModeRow(
                mass=mass,
                n=n,
                probability=float(probability),
                well_width=width,
                separation=d,
                gamma=s.gamma,
                delta=s.delta,
                nmax=nmax,
            )
            for n, probability in enumerate(probabilities, start=1)
        ]

    return [row for rows in _ordered_map(distribution, list(masses), workers) for row in rows]


def critical_mass(rows: Sequence[GridRow], width: float) -> CriticalMass:
    """
        Mass of maximal ground-state entropy along one width of a grid. An interior maximum is
        refined by a parabola through its neighbours in ln m.
    """
    line = sorted(
        (row for row in rows if not row.failed and math.isclose(row.well_width, width, rel_tol=1e-9)),
        key=lambda row: row.mass,
    )
    if not line:
        raise InvalidParameterError(f"no successful grid cells at L={width:g} m")
    entropies = np.array([row.entropy for row in line])
    best = int(np.argmax(entropies))
    interior = 0 < best < len(line) - 1
    if not interior:
        return CriticalMass(mass=line[best].mass, entropy=float(entropies[best]), interior=False)

    x = np.log([line[best - 1].mass, line[best].mass, line[best + 1].mass])
    y = entropies[best - 1 : best + 2]
    curvature, slope, offset = np.polyfit(x, y, 2)
    if curvature >= 0:
        return CriticalMass(mass=line[best].mass, entropy=float(entropies[best]), interior=True)
    peak = float(np.clip(-slope / (2.0 * curvature), x[0], x[2]))
    return CriticalMass(
        mass=math.exp(peak),
        entropy=float(np.polyval([curvature, slope, offset], peak)),
        interior=True,
    )


def grid_rank_correlation(rows: Sequence[GridRow]) -> float:
    """Spearman rank correlation between ground-state S and w over the successful cells."""
    usable = [row for row in rows if not row.failed]
    if len(usable) < 3:
        raise InvalidParameterError(f"rank correlation needs at least 3 successful cells, got {len(usable)}")
    result = spearmanr([row.entropy for row in usable], [row.witness for row in usable])
    return float(result.statistic)
