# Standard Library
from typing import Annotated

# Third Party
from pydantic import BaseModel, ConfigDict, Field


class PositionObservables(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean_u1: float
    mean_u2: float
    corr_u1u2: float
    covariance: float


class EntanglementReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    entropy: Annotated[float, Field(ge=0)]
    witness: float
    witness_dimension: Annotated[int, Field(ge=1)]
    schmidt: list[float]
    mode_probs: list[float]
    position: PositionObservables
