# Third Party
import pytest

# First Party
from qgem_well.cli.configuration import QGEM_ENV_VARS


@pytest.fixture(autouse=True)
def env_setup(monkeypatch):
    for env_variable in QGEM_ENV_VARS:
        monkeypatch.delenv(env_variable.key_name, raising=False)


@pytest.fixture
def tiny_overrides(tmp_path):
    return [
        "scaled.nmax=6",
        "scaled.levels=3",
        "scaled.n_d=3",
        "sweep.deltas=[1.0, 0.5]",
        "sweep.spectrum_levels=6",
        "sweep.nmaxes=[4, 6]",
        "sweep.grid_points=2",
        "sweep.mode_masses=[1e-17, 2e-17]",
        'decoherence.hamiltonian="free"',
        "decoherence.time_step=1e-3",
        "decoherence.steps=500",
        "wavefunction.resolution=16",
        f'output.out_dir="{tmp_path / "out"}"',
        f'output.cache_dir="{tmp_path / "cache"}"',
    ]
