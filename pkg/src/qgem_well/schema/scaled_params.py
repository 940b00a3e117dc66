# Standard Library
from typing import Annotated

# Third Party
from pydantic import BaseModel, ConfigDict, Field


class ScaledParams(BaseModel):
    """
        Dimensionless problem: H/E0 = (n1^2 + n2^2)/2 - gamma/(u1 + u2 + delta) on the unit square
    """

    model_config = ConfigDict(frozen=True)

    gamma: Annotated[float, Field(ge=0, allow_inf_nan=False)]
    delta: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    nmax: Annotated[int, Field(ge=2)]
    energy_unit: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    time_unit: Annotated[float, Field(gt=0, allow_inf_nan=False)]

    def with_gamma(self, gamma: float) -> "ScaledParams":
        return ScaledParams(**{**self.model_dump(), "gamma": gamma})

    def with_nmax(self, nmax: int) -> "ScaledParams":
        return ScaledParams(**{**self.model_dump(), "nmax": nmax})
