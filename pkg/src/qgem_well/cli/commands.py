# Standard Library
import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

# Third Party
import numpy as np
from tomlkit.toml_document import TOMLDocument

# First Party
from qgem_well.cli.cache_manager import JTableCache
from qgem_well.cli.configuration import config_document
from qgem_well.constants import (
    CSV_CONVERGE,
    CSV_DECOHERE,
    CSV_DISTANCE,
    CSV_ENTROPY,
    CSV_FEASIBILITY,
    CSV_GRID,
    CSV_LEVELS,
    CSV_MODES,
    CSV_SOLVE,
    CSV_WAVEFUNCTION,
    DECOHERENCE_CAVEAT,
    MIN_FIT_SAMPLES,
)
from qgem_well.helpers.csv_writer import write_csv, write_records
from qgem_well.helpers.exception_handler import exit_code_for
from qgem_well.schema.hamiltonian_mode import HamiltonianMode
from qgem_well.schema.run_config import RunConfig
from qgem_well.schema.sub_command import SubCommand
from qgem_well.schema.sweep_rows import (
    ConvergeRow,
    DecohereRow,
    EntropyRow,
    FeasibilityRow,
    GridRow,
    LevelRow,
    ModeRow,
    SolveRow,
)
from qgem_well.simulation import decohere, sweep, units
from qgem_well.simulation.entangle import wavefunction_grid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandContext:
    subcommand: SubCommand
    config: RunConfig
    cache: JTableCache
    document: TOMLDocument
    generated_at: datetime | None = None

    @property
    def out_dir(self) -> Path:
        return Path(self.config.output.out_dir)

    @property
    def workers(self) -> int:
        return self.config.output.workers

    def output(self, file_name: str) -> Path:
        return self.out_dir / file_name


def _solve(context: CommandContext) -> list[Path]:
    config = context.config
    point = sweep.solve_point(
        config.physical.to_params(),
        config.scaled.nmax,
        config.scaled.levels,
        accuracy=config.quadrature.accuracy,
        gamma_override=config.scaled.gamma_override,
        n_w=config.scaled.witness_dimension,
        table_factory=context.cache,
        workers=context.workers,
    )
    ground = point.solution.ground
    logger.info(
        f"ground state: E={ground.energy:.10g} E0, S={point.reports[0].entropy:.6g}, w={point.reports[0].witness:.6g}"
    )
    path = write_csv(
        context.output(CSV_SOLVE),
        context.subcommand.value,
        SolveRow,
        sweep.solve_rows(point),
        context.document,
        generated_at=context.generated_at,
    )
    return [path]


def _sweep_distance(context: CommandContext) -> list[Path]:
    config = context.config
    rows = sweep.distance_sweep(
        config.physical.to_params(),
        config.sweep.deltas,
        config.scaled.levels,
        config.scaled.nmax,
        accuracy=config.quadrature.accuracy,
        n_w=config.scaled.witness_dimension,
        table_factory=context.cache,
        workers=context.workers,
    )
    return [
        write_csv(
            context.output(CSV_DISTANCE), context.subcommand.value, LevelRow, rows, context.document,
            generated_at=context.generated_at,
        )
    ]


def _spectrum_shift(context: CommandContext) -> list[Path]:
    config = context.config
    p = config.physical.to_params()
    rows = sweep.spectrum_shift(
        p,
        config.sweep.spectrum_levels,
        config.scaled.nmax,
        accuracy=config.quadrature.accuracy,
        n_w=config.scaled.witness_dimension,
        table_factory=context.cache,
        workers=context.workers,
    )
    s = units.scale_params(p, config.scaled.nmax)
    refined = -s.gamma * context.cache(s.delta, 2 * config.scaled.nmax, config.quadrature.accuracy).entry(0, 0)
    notes = [
        f"crude_asymptote_E0={units.newtonian_shift_estimate(p)!r}",
        f"refined_asymptote_E0={refined!r}",
    ]
    return [
        write_csv(
            context.output(CSV_LEVELS), context.subcommand.value, LevelRow, rows, context.document,
            generated_at=context.generated_at, notes=notes,
        )
    ]


def _entropy_spectrum(context: CommandContext) -> list[Path]:
    config = context.config
    rows, fit = sweep.entropy_spectrum(
        config.physical.to_params(),
        config.sweep.spectrum_levels,
        config.scaled.nmax,
        accuracy=config.quadrature.accuracy,
        n_w=config.scaled.witness_dimension,
        table_factory=context.cache,
        workers=context.workers,
    )
    notes = [f"log_fit a={fit.a!r} b={fit.b!r} r_squared={fit.r_squared!r}"]
    return [
        write_csv(
            context.output(CSV_ENTROPY), context.subcommand.value, EntropyRow, rows, context.document,
            generated_at=context.generated_at, notes=notes,
        )
    ]


def _grid_mass_width(context: CommandContext) -> list[Path]:
    config = context.config
    grid = config.sweep
    masses = np.geomspace(grid.mass_min, grid.mass_max, grid.grid_points).tolist()
    widths = np.linspace(grid.width_min, grid.width_max, grid.grid_points).tolist()
    rows = sweep.mass_width_grid(
        masses,
        widths,
        config.physical.separation,
        config.scaled.nmax,
        accuracy=config.quadrature.accuracy,
        n_w=config.scaled.witness_dimension,
        base=config.physical.to_params(),
        table_factory=context.cache,
        workers=context.workers,
    )
    notes = []
    if sum(not row.failed for row in rows) >= 3:
        notes.append(f"rank_correlation_S_w={sweep.grid_rank_correlation(rows)!r}")
    nearest_width = min(widths, key=lambda width: abs(width - config.physical.well_width))
    try:
        peak = sweep.critical_mass(rows, nearest_width)
        notes.append(
            f"critical_mass L_m={nearest_width!r} m_kg={peak.mass!r} S={peak.entropy!r} interior={peak.interior}"
        )
    except ValueError as error:
        logger.warning(f"no critical mass estimate: {error}")
    return [
        write_csv(
            context.output(CSV_GRID), context.subcommand.value, GridRow, rows, context.document,
            generated_at=context.generated_at, notes=notes,
        )
    ]


def _converge(context: CommandContext) -> list[Path]:
    config = context.config
    rows = sweep.convergence_study(
        config.physical.to_params(),
        config.sweep.nmaxes,
        accuracy=config.quadrature.accuracy,
        table_factory=context.cache,
        workers=context.workers,
    )
    last = rows[-1].rel_diff
    if last is not None and last > config.thresholds.convergence:
        logger.warning(
            f"ground energy not converged: last relative change {last:.3e} > {config.thresholds.convergence}"
        )
    return [
        write_csv(
            context.output(CSV_CONVERGE), context.subcommand.value, ConvergeRow, rows, context.document,
            generated_at=context.generated_at,
        )
    ]


def _decohere(context: CommandContext) -> list[Path]:
    config = context.config
    p = config.physical.to_params()
    n_d, nmax, mode = config.scaled.n_d, config.scaled.nmax, config.decoherence.hamiltonian
    gamma_override = config.scaled.gamma_override if mode is HamiltonianMode.COUPLED else 0.0
    point = sweep.solve_point(
        p,
        nmax,
        config.decoherence.level,
        accuracy=config.quadrature.accuracy,
        gamma_override=gamma_override,
        table_factory=context.cache,
        workers=context.workers,
    )
    s = point.scaled
    level = point.solution.levels[config.decoherence.level - 1]
    table = context.cache(s.delta, 2 * nmax, config.quadrature.accuracy).truncated(2 * n_d)
    h = decohere.decoherence_hamiltonian(mode, n_d, s, table)
    bath = decohere.scale_decoherence(p, s)
    logger.info(f"decoherence run: kappa1={bath.kappa1:.6g}, kappa2={bath.kappa2:.6g}, n_d={n_d}, mode={mode.value}")

    trajectory = decohere.evolve(
        decohere.pure_state(level.coefficients, n_d),
        h,
        bath,
        config.decoherence.time_step,
        config.decoherence.steps,
    )
    notes = [
        f"kappa1={bath.kappa1!r} kappa2={bath.kappa2!r}",
        f"max_hermiticity_drift={trajectory.max_hermiticity_drift!r} positivity_trips={trajectory.positivity_trips}",
    ]
    if trajectory.times.size >= MIN_FIT_SAMPLES:
        fit = decohere.decoherence_time(trajectory, config.decoherence.transient_fraction, kappa2=bath.kappa2)
        notes.append(f"tau_d_t0={fit.tau_d!r} r_squared={fit.r_squared!r} window_start_t0={fit.window_start!r}")
        final_separation = config.feasibility.final_separation or p.separation
        adiabatic = units.adiabaticity_check(
            config.feasibility.initial_separation,
            final_separation,
            config.feasibility.velocity,
            p,
            config.thresholds.adiabatic_ratio,
        )
        budget = decohere.coherence_budget(fit.tau_d, s, adiabatic.tau_c)
        notes.append(f"tau_d_s={budget.tau_d_s!r} tau_c_s={budget.tau_c_s!r} sufficient={budget.sufficient}")
        logger.info(f"tau_d = {fit.tau_d:.6g} t0 = {budget.tau_d_s:.6g} s (R^2 = {fit.r_squared:.4f})")
    return [
        write_csv(
            context.output(CSV_DECOHERE), context.subcommand.value, DecohereRow, trajectory.rows(), context.document,
            caveats=[DECOHERENCE_CAVEAT], generated_at=context.generated_at, notes=notes,
        )
    ]


def _feasibility(context: CommandContext) -> list[Path]:
    config = context.config
    p = config.physical.to_params()
    feasibility = config.feasibility
    report = units.feasibility_report(
        p,
        feasibility.initial_separation,
        feasibility.final_separation or p.separation,
        feasibility.velocity,
        feasibility.density or units.default_density(p),
        feasibility.interaction_range,
        adiabatic_threshold=config.thresholds.adiabatic_ratio,
        kb_threshold=config.thresholds.kb_product,
        density_ratio_threshold=config.thresholds.density_ratio,
    )
    logger.info(f"feasibility: {report.pass_flags()}")
    row = FeasibilityRow(
        tau_c=report.tau_c,
        tau_o=report.tau_o,
        ratio=report.adiabatic_ratio,
        k_wavenumber=report.k_wavenumber,
        kb_product=report.kb_product,
        density_ratio=report.density_ratio,
        pass_flags=report.pass_flags(),
    )
    return [
        write_csv(
            context.output(CSV_FEASIBILITY), context.subcommand.value, FeasibilityRow, [row], context.document,
            generated_at=context.generated_at,
        )
    ]


def _wavefunction(context: CommandContext) -> list[Path]:
    config = context.config
    level_index = config.wavefunction.level
    point = sweep.solve_point(
        config.physical.to_params(),
        config.scaled.nmax,
        max(level_index, config.scaled.levels),
        accuracy=config.quadrature.accuracy,
        gamma_override=config.scaled.gamma_override,
        n_w=config.scaled.witness_dimension,
        table_factory=context.cache,
        workers=context.workers,
    )
    level = point.solution.levels[level_index - 1]
    grid = wavefunction_grid(level.coefficients, config.wavefunction.resolution)
    u1, u2 = np.meshgrid(grid.u, grid.u, indexing="ij")
    records = zip(u1.ravel().tolist(), u2.ravel().tolist(), grid.psi.ravel().tolist(), strict=True)
    n1, n2 = level.free_label
    notes = [
        f"level={level_index} sector={level.sector.value} n1={n1} n2={n2} energy_E0={level.energy!r}",
        f"covariance={point.reports[level_index - 1].position.covariance!r}",
    ]
    return [
        write_records(
            context.output(CSV_WAVEFUNCTION), context.subcommand.value, ("u1", "u2", "psi"), records,
            context.document, generated_at=context.generated_at, notes=notes,
        )
    ]


def _modes(context: CommandContext) -> list[Path]:
    config = context.config
    rows = sweep.mode_distribution(
        config.sweep.mode_masses,
        config.physical.well_width,
        config.physical.separation,
        config.scaled.nmax,
        accuracy=config.quadrature.accuracy,
        base=config.physical.to_params(),
        table_factory=context.cache,
        workers=context.workers,
    )
    return [
        write_csv(
            context.output(CSV_MODES), context.subcommand.value, ModeRow, rows, context.document,
            generated_at=context.generated_at,
        )
    ]


HANDLERS: dict[SubCommand, Callable[[CommandContext], list[Path]]] = {
    SubCommand.SOLVE: _solve,
    SubCommand.SWEEP_DISTANCE: _sweep_distance,
    SubCommand.SPECTRUM_SHIFT: _spectrum_shift,
    SubCommand.ENTROPY_SPECTRUM: _entropy_spectrum,
    SubCommand.GRID_MASS_WIDTH: _grid_mass_width,
    SubCommand.CONVERGE: _converge,
    SubCommand.DECOHERE: _decohere,
    SubCommand.FEASIBILITY: _feasibility,
    SubCommand.WAVEFUNCTION: _wavefunction,
    SubCommand.MODES: _modes,
}


def run(subcommand: SubCommand, config: RunConfig, generated_at: datetime | None = None) -> int:
    """
        Execute one subcommand and write its result files
    :param subcommand:
        What to compute
    :param config:
        Resolved configuration
    :param generated_at:
        Timestamp written to the result headers, now when omitted
    :return: exit status, 0 success, 1 configuration error, 2 numeric failure
    """
    started = time.perf_counter()
    logger.info(f"Starting {subcommand.value}")
    try:
        context = CommandContext(
            subcommand=subcommand,
            config=config,
            cache=JTableCache(config.output.cache_dir, workers=config.output.workers),
            document=config_document(config, subcommand),
            generated_at=generated_at,
        )
        paths = HANDLERS[subcommand](context)
    except Exception as error:
        return exit_code_for(error)
    logger.info(
        f"Finished {subcommand.value} in {time.perf_counter() - started:.1f}s, wrote {', '.join(map(str, paths))}"
    )
    return exit_code_for(None)
