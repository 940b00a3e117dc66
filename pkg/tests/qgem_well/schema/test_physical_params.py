# Third Party
import pytest
from pydantic import ValidationError
from scipy import constants

# First Party
from qgem_well.schema.bath_params import BathParams
from qgem_well.schema.hamiltonian_mode import HamiltonianMode
from qgem_well.schema.physical_params import PhysicalParams
from qgem_well.schema.scaled_params import ScaledParams
from qgem_well.schema.sector import Sector
from qgem_well.schema.sub_command import SubCommand


def test_physical_params_defaults_to_codata_constants():
    p = PhysicalParams(mass=1e-17, well_width=50e-6, separation=1e-6)
    assert p.grav_constant == constants.G
    assert p.hbar == constants.hbar
    assert p.temperature == 0.0


@pytest.mark.parametrize("field", ["mass", "well_width", "separation"])
def test_physical_params_rejects_non_positive(field):
    values = {"mass": 1e-17, "well_width": 50e-6, "separation": 1e-6, field: 0.0}
    with pytest.raises(ValidationError):
        PhysicalParams(**values)


def test_physical_params_rejects_negative_temperature():
    with pytest.raises(ValidationError):
        PhysicalParams(mass=1e-17, well_width=50e-6, separation=1e-6, temperature=-1.0)


def test_physical_params_is_frozen():
    p = PhysicalParams(mass=1e-17, well_width=50e-6, separation=1e-6)
    with pytest.raises(ValidationError):
        p.mass = 2e-17


def test_physical_params_with_helpers():
    p = PhysicalParams(mass=1e-17, well_width=50e-6, separation=1e-6, temperature=1e-3)
    assert p.with_mass(2e-17).mass == 2e-17
    assert p.with_well_width(25e-6).well_width == 25e-6
    moved = p.with_separation(2e-6)
    assert moved.separation == 2e-6
    assert moved.temperature == 1e-3
    assert p.separation == 1e-6


def test_scaled_params_helpers():
    s = ScaledParams(gamma=30.0, delta=0.02, nmax=20, energy_unit=4e-42, time_unit=2.5e7)
    assert s.with_gamma(0.0).gamma == 0.0
    assert s.with_nmax(40).nmax == 40
    assert s.with_nmax(40).delta == 0.02


def test_scaled_params_rejects_zero_delta():
    with pytest.raises(ValidationError):
        ScaledParams(gamma=30.0, delta=0.0, nmax=20, energy_unit=4e-42, time_unit=2.5e7)


def test_bath_params_rejects_negative_rates():
    with pytest.raises(ValidationError):
        BathParams(kappa1=-0.1, kappa2=1.0)


def test_sector_sign_and_label():
    assert Sector.SYMMETRIC.sign == 1
    assert Sector.ANTISYMMETRIC.sign == -1
    assert Sector.SYMMETRIC.short_label == "s"
    assert Sector.ANTISYMMETRIC.short_label == "a"


def test_enums_parse_from_text():
    assert SubCommand("grid-mass-width") is SubCommand.GRID_MASS_WIDTH
    assert HamiltonianMode("free") is HamiltonianMode.FREE
    assert Sector("antisymmetric") is Sector.ANTISYMMETRIC
