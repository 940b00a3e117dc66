# Third Party
import pytest
from pydantic import ValidationError

# First Party
from qgem_well.constants import DEFAULT_DELTAS, DESK_NMAX
from qgem_well.schema.hamiltonian_mode import HamiltonianMode
from qgem_well.schema.run_config import RunConfig


def test_run_config_defaults_are_the_running_example():
    config = RunConfig()
    assert config.physical.mass == 1e-17
    assert config.physical.well_width == 50e-6
    assert config.physical.separation == 1e-6
    assert config.scaled.nmax == DESK_NMAX
    assert config.scaled.witness_dimension == DESK_NMAX
    assert config.sweep.deltas == list(DEFAULT_DELTAS)
    assert config.decoherence.hamiltonian is HamiltonianMode.COUPLED
    assert config.output.workers == 1


def test_run_config_to_params():
    config = RunConfig.model_validate({"physical": {"mass": 2e-17, "temperature": 0.5}})
    p = config.physical.to_params()
    assert p.mass == 2e-17
    assert p.temperature == 0.5
    assert p.well_width == 50e-6


def test_run_config_explicit_witness_dimension():
    config = RunConfig.model_validate({"scaled": {"nmax": 20, "n_w": 5, "n_d": 4}})
    assert config.scaled.witness_dimension == 5


def test_run_config_rejects_unknown_key():
    with pytest.raises(ValidationError):
        RunConfig.model_validate({"scaled": {"nmax": 20, "n_max": 30}})


@pytest.mark.parametrize(
    "values",
    [
        {"scaled": {"nmax": 10, "n_w": 11, "n_d": 4}},
        {"scaled": {"nmax": 6, "n_d": 8}},
        {"scaled": {"nmax": 4, "levels": 17, "n_d": 4}},
        {"scaled": {"nmax": 4, "n_d": 4}, "sweep": {"spectrum_levels": 17}},
        {"sweep": {"deltas": [0.5, 1.0]}},
        {"sweep": {"deltas": []}},
        {"sweep": {"nmaxes": [40, 20]}},
        {"sweep": {"mass_min": 2e-17, "mass_max": 1e-17}},
        {"sweep": {"width_min": 150e-6, "width_max": 25e-6}},
        {"sweep": {"mode_masses": []}},
        {"feasibility": {"initial_separation": 1e-7}},
        {"quadrature": {"accuracy": 1e-3}},
        {"wavefunction": {"resolution": 8}},
        {"output": {"workers": 0}},
        {"decoherence": {"hamiltonian": "lindblad"}},
    ],
)
def test_run_config_rejects_inconsistent_values(values):
    with pytest.raises(ValidationError):
        RunConfig.model_validate(values)


def test_run_config_final_separation_overrides_physical():
    config = RunConfig.model_validate({"feasibility": {"initial_separation": 5e-6, "final_separation": 2e-6}})
    assert config.feasibility.final_separation == 2e-6


def test_run_config_dump_is_json_ready():
    dumped = RunConfig().model_dump(mode="json", exclude_none=True)
    assert dumped["decoherence"]["hamiltonian"] == "coupled"
    assert "n_w" not in dumped["scaled"]
