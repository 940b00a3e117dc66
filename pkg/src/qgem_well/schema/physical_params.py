# Standard Library
from typing import Annotated

# Third Party
from pydantic import BaseModel, ConfigDict, Field
from scipy import constants

PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]
NonNegativeFloat = Annotated[float, Field(ge=0, allow_inf_nan=False)]


class PhysicalParams(BaseModel):
    """
        Laboratory-frame inputs in SI units. Both particles share the same mass.
    """

    model_config = ConfigDict(frozen=True)

    mass: PositiveFloat
    well_width: PositiveFloat
    separation: PositiveFloat
    temperature: NonNegativeFloat = 0.0
    damping: NonNegativeFloat = 0.0
    cutoff: NonNegativeFloat = 0.0
    grav_constant: NonNegativeFloat = constants.G
    hbar: PositiveFloat = constants.hbar
    boltzmann: PositiveFloat = constants.k

    def with_mass(self, mass: float) -> "PhysicalParams":
        return PhysicalParams(**{**self.model_dump(), "mass": mass})

    def with_well_width(self, well_width: float) -> "PhysicalParams":
        return PhysicalParams(**{**self.model_dump(), "well_width": well_width})

    def with_separation(self, separation: float) -> "PhysicalParams":
        return PhysicalParams(**{**self.model_dump(), "separation": separation})
