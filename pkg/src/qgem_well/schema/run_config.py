# Standard Library
from typing import Annotated

# Third Party
from pydantic import BaseModel, ConfigDict, Field, model_validator

# First Party
from qgem_well.constants import (
    ADIABATIC_RATIO_THRESHOLD,
    CONVERGENCE_THRESHOLD,
    DEFAULT_APPROACH_VELOCITY_M_PER_S,
    DEFAULT_CACHE_DIR,
    DEFAULT_CUTOFF_PER_S,
    DEFAULT_DAMPING_PER_S,
    DEFAULT_DECOHERENCE_TRUNCATION,
    DEFAULT_DELTAS,
    DEFAULT_GRID_POINTS,
    DEFAULT_GRID_RESOLUTION,
    DEFAULT_INITIAL_SEPARATION_M,
    DEFAULT_INTERACTION_RANGE_M,
    DEFAULT_LEVELS,
    DEFAULT_MASS_KG,
    DEFAULT_MASS_MAX_KG,
    DEFAULT_MASS_MIN_KG,
    DEFAULT_MODE_MASSES_KG,
    DEFAULT_NMAX_LADDER,
    DEFAULT_OUT_DIR,
    DEFAULT_QUADRATURE_ACCURACY,
    DEFAULT_SEPARATION_M,
    DEFAULT_STEPS,
    DEFAULT_TEMPERATURE_K,
    DEFAULT_TIME_STEP,
    DEFAULT_TRANSIENT_FRACTION,
    DEFAULT_WELL_WIDTH_M,
    DEFAULT_WIDTH_MAX_M,
    DEFAULT_WIDTH_MIN_M,
    DENSITY_RATIO_THRESHOLD,
    DESK_NMAX,
    DESK_SPECTRUM_LEVELS,
    KB_PRODUCT_THRESHOLD,
    MAX_QUADRATURE_ACCURACY,
    MIN_GRID_RESOLUTION,
)
from qgem_well.schema.hamiltonian_mode import HamiltonianMode
from qgem_well.schema.physical_params import PhysicalParams

Positive = Annotated[float, Field(gt=0, allow_inf_nan=False)]
NonNegative = Annotated[float, Field(ge=0, allow_inf_nan=False)]


class ConfigSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PhysicalSection(ConfigSection):
    mass: Positive = DEFAULT_MASS_KG
    well_width: Positive = DEFAULT_WELL_WIDTH_M
    separation: Positive = DEFAULT_SEPARATION_M
    temperature: NonNegative = DEFAULT_TEMPERATURE_K
    damping: NonNegative = DEFAULT_DAMPING_PER_S
    cutoff: NonNegative = DEFAULT_CUTOFF_PER_S

    def to_params(self) -> PhysicalParams:
        return PhysicalParams(**self.model_dump())


class ScaledSection(ConfigSection):
    nmax: Annotated[int, Field(ge=2)] = DESK_NMAX
    levels: Annotated[int, Field(ge=1)] = DEFAULT_LEVELS
    n_w: Annotated[int, Field(ge=1)] | None = None
    n_d: Annotated[int, Field(ge=2)] = DEFAULT_DECOHERENCE_TRUNCATION
    gamma_override: NonNegative | None = None

    @property
    def witness_dimension(self) -> int:
        return self.nmax if self.n_w is None else self.n_w


class QuadratureSection(ConfigSection):
    accuracy: Annotated[float, Field(gt=0, le=MAX_QUADRATURE_ACCURACY)] = DEFAULT_QUADRATURE_ACCURACY


class ThresholdsSection(ConfigSection):
    adiabatic_ratio: Positive = ADIABATIC_RATIO_THRESHOLD
    kb_product: Positive = KB_PRODUCT_THRESHOLD
    density_ratio: Positive = DENSITY_RATIO_THRESHOLD
    convergence: Positive = CONVERGENCE_THRESHOLD


class FeasibilitySection(ConfigSection):
    initial_separation: Positive = DEFAULT_INITIAL_SEPARATION_M
    final_separation: Positive | None = None
    velocity: Positive = DEFAULT_APPROACH_VELOCITY_M_PER_S
    density: Positive | None = None
    interaction_range: Positive = DEFAULT_INTERACTION_RANGE_M


class SweepSection(ConfigSection):
    deltas: list[Positive] = Field(default_factory=lambda: list(DEFAULT_DELTAS))
    spectrum_levels: Annotated[int, Field(ge=3)] = DESK_SPECTRUM_LEVELS
    nmaxes: list[Annotated[int, Field(ge=2)]] = Field(default_factory=lambda: list(DEFAULT_NMAX_LADDER))
    mass_min: Positive = DEFAULT_MASS_MIN_KG
    mass_max: Positive = DEFAULT_MASS_MAX_KG
    width_min: Positive = DEFAULT_WIDTH_MIN_M
    width_max: Positive = DEFAULT_WIDTH_MAX_M
    grid_points: Annotated[int, Field(ge=2)] = DEFAULT_GRID_POINTS
    mode_masses: list[Positive] = Field(default_factory=lambda: list(DEFAULT_MODE_MASSES_KG))


class DecoherenceSection(ConfigSection):
    time_step: Positive = DEFAULT_TIME_STEP
    steps: Annotated[int, Field(ge=1)] = DEFAULT_STEPS
    hamiltonian: HamiltonianMode = HamiltonianMode.COUPLED
    level: Annotated[int, Field(ge=1)] = 1
    transient_fraction: Annotated[float, Field(ge=0, lt=1)] = DEFAULT_TRANSIENT_FRACTION


class WavefunctionSection(ConfigSection):
    level: Annotated[int, Field(ge=1)] = 1
    resolution: Annotated[int, Field(ge=MIN_GRID_RESOLUTION)] = DEFAULT_GRID_RESOLUTION


class OutputSection(ConfigSection):
    out_dir: str = DEFAULT_OUT_DIR
    cache_dir: str = DEFAULT_CACHE_DIR
    workers: Annotated[int, Field(ge=1)] = 1
    paper_scale: bool = False


class RunConfig(ConfigSection):
    """
        Fully resolved run configuration. Defaults reproduce the running example
        m = 1e-17 kg, L = 50 um, d = 1 um at desk scale.
    """

    physical: PhysicalSection = Field(default_factory=PhysicalSection)
    scaled: ScaledSection = Field(default_factory=ScaledSection)
    quadrature: QuadratureSection = Field(default_factory=QuadratureSection)
    thresholds: ThresholdsSection = Field(default_factory=ThresholdsSection)
    feasibility: FeasibilitySection = Field(default_factory=FeasibilitySection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    decoherence: DecoherenceSection = Field(default_factory=DecoherenceSection)
    wavefunction: WavefunctionSection = Field(default_factory=WavefunctionSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def check_combinations(self) -> "RunConfig":
        nmax = self.scaled.nmax
        if self.scaled.witness_dimension > nmax:
            raise ValueError(f"scaled.n_w ({self.scaled.n_w}) must not exceed scaled.nmax ({nmax})")
        if self.scaled.n_d > nmax:
            raise ValueError(f"scaled.n_d ({self.scaled.n_d}) must not exceed scaled.nmax ({nmax})")
        for name, count in (
            ("scaled.levels", self.scaled.levels),
            ("sweep.spectrum_levels", self.sweep.spectrum_levels),
            ("wavefunction.level", self.wavefunction.level),
            ("decoherence.level", self.decoherence.level),
        ):
            if count > nmax * nmax:
                raise ValueError(f"{name} ({count}) exceeds the nmax^2 = {nmax * nmax} two-particle states")
        deltas = self.sweep.deltas
        if not deltas or any(later >= earlier for earlier, later in zip(deltas, deltas[1:], strict=False)):
            raise ValueError(f"sweep.deltas must be non-empty and strictly descending, got {deltas}")
        nmaxes = self.sweep.nmaxes
        if not nmaxes or any(later <= earlier for earlier, later in zip(nmaxes, nmaxes[1:], strict=False)):
            raise ValueError(f"sweep.nmaxes must be non-empty and strictly increasing, got {nmaxes}")
        if self.sweep.mass_min >= self.sweep.mass_max:
            raise ValueError("sweep.mass_min must be below sweep.mass_max")
        if self.sweep.width_min >= self.sweep.width_max:
            raise ValueError("sweep.width_min must be below sweep.width_max")
        if not self.sweep.mode_masses:
            raise ValueError("sweep.mode_masses must not be empty")
        final = self.feasibility.final_separation or self.physical.separation
        if self.feasibility.initial_separation <= final:
            raise ValueError(
                f"feasibility.initial_separation ({self.feasibility.initial_separation}) must exceed "
                f"the final separation ({final})"
            )
        return self
