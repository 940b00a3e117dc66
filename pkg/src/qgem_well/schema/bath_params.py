# Standard Library
from typing import Annotated

# Third Party
from pydantic import BaseModel, ConfigDict, Field


class BathParams(BaseModel):
    """
        Dimensionless Caldeira-Leggett rates in time units of t0:
        kappa1 multiplies the i[u^2, rho] terms, kappa2 the -[u, [u, rho]] terms.
    """

    model_config = ConfigDict(frozen=True)

    kappa1: Annotated[float, Field(ge=0, allow_inf_nan=False)]
    kappa2: Annotated[float, Field(ge=0, allow_inf_nan=False)]
