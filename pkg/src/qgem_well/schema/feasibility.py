# Standard Library
from typing import Annotated

# Third Party
from pydantic import BaseModel, ConfigDict, Field

NonNegative = Annotated[float, Field(ge=0)]


class AdiabaticityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau_c: NonNegative
    tau_o: NonNegative
    ratio: NonNegative
    threshold: NonNegative
    adiabatic: bool


class FeasibilityReport(BaseModel):
    """
        Experimental feasibility scales. The adiabaticity fields stay None when only the
        pseudopotential conditions were evaluated.
    """

    model_config = ConfigDict(frozen=True)

    tau_c: NonNegative | None = None
    tau_o: NonNegative | None = None
    adiabatic_ratio: NonNegative | None = None
    k_wavenumber: NonNegative
    kb_product: NonNegative
    density_ratio: NonNegative
    flags: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def pass_flags(self) -> str:
        return ";".join(f"{name}={'pass' if ok else 'fail'}" for name, ok in sorted(self.flags.items()))
