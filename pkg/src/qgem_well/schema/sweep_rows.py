# Standard Library
from typing import Annotated, Any

# Third Party
from pydantic import BaseModel, ConfigDict, Field

# First Party
from qgem_well.schema.sector import Sector


class CsvRow(BaseModel):
    """
        Base of every emitted row. Field order is column order; serialization aliases are column names.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @classmethod
    def columns(cls) -> list[str]:
        return [field.serialization_alias or name for name, field in cls.model_fields.items()]

    def as_record(self) -> dict[str, Any]:
        return self.model_dump(by_alias=True, mode="json")


class LevelRow(CsvRow):
    delta: float
    level: Annotated[int, Field(ge=1)]
    energy: float = Field(serialization_alias="energy_E0")
    sector: Sector
    n1: Annotated[int, Field(ge=1)]
    n2: Annotated[int, Field(ge=1)]
    energy_shift: float = Field(serialization_alias="dE")
    entropy: float | None = Field(default=None, serialization_alias="S")
    witness: float | None = Field(default=None, serialization_alias="w")
    residual: float
    mass: float = Field(serialization_alias="m_kg")
    well_width: float = Field(serialization_alias="L_m")
    separation: float = Field(serialization_alias="d_m")
    gamma: float
    nmax: int


class SolveRow(CsvRow):
    level: Annotated[int, Field(ge=1)]
    energy: float = Field(serialization_alias="energy_E0")
    sector: Sector
    n1: Annotated[int, Field(ge=1)]
    n2: Annotated[int, Field(ge=1)]
    energy_shift: float = Field(serialization_alias="dE")
    entropy: float = Field(serialization_alias="S")
    witness: float = Field(serialization_alias="w")
    witness_dimension: int = Field(serialization_alias="n_w")
    covariance: float
    residual: float
    converged: bool
    delta: float
    gamma: float
    nmax: int
    mass: float = Field(serialization_alias="m_kg")
    well_width: float = Field(serialization_alias="L_m")
    separation: float = Field(serialization_alias="d_m")


class EntropyRow(CsvRow):
    level: Annotated[int, Field(ge=1)]
    energy: float = Field(serialization_alias="energy_E0")
    entropy: float = Field(serialization_alias="S")
    witness: float = Field(serialization_alias="w")
    sector: Sector
    n1: int
    n2: int
    delta: float
    gamma: float
    nmax: int
    mass: float = Field(serialization_alias="m_kg")
    well_width: float = Field(serialization_alias="L_m")


class LogFit(BaseModel):
    """Least-squares fit S = a + b ln n."""

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    r_squared: float


class GridRow(CsvRow):
    mass: float = Field(serialization_alias="m_kg")
    well_width: float = Field(serialization_alias="L_m")
    gamma: float
    delta: float
    entropy: float | None = Field(default=None, serialization_alias="S")
    witness: float | None = Field(default=None, serialization_alias="w")
    nmax: int
    separation: float = Field(serialization_alias="d_m")
    error: str = ""

    @property
    def failed(self) -> bool:
        return bool(self.error)


class ConvergeRow(CsvRow):
    nmax: int
    ground_energy: float = Field(serialization_alias="E_ground_E0")
    rel_diff: float | None = None
    delta: float
    gamma: float
    mass: float = Field(serialization_alias="m_kg")
    well_width: float = Field(serialization_alias="L_m")


class ModeRow(CsvRow):
    mass: float = Field(serialization_alias="m_kg")
    n: Annotated[int, Field(ge=1)]
    probability: float = Field(serialization_alias="P_n")
    well_width: float = Field(serialization_alias="L_m")
    separation: float = Field(serialization_alias="d_m")
    gamma: float
    delta: float
    nmax: int


class DecohereRow(CsvRow):
    time: float = Field(serialization_alias="time_t0")
    purity: float
    trace_err: float
    min_eig: float


class FeasibilityRow(CsvRow):
    tau_c: float | None = Field(serialization_alias="tau_c_s")
    tau_o: float | None = Field(serialization_alias="tau_o_s")
    ratio: float | None
    k_wavenumber: float = Field(serialization_alias="k_1_per_m")
    kb_product: float = Field(serialization_alias="kb")
    density_ratio: float
    pass_flags: str
