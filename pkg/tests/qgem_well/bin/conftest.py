# Third Party
import pytest

# First Party
from qgem_well.cli.configuration import QGEM_ENV_VARS


@pytest.fixture(autouse=True)
def env_setup(monkeypatch):
    for env_variable in QGEM_ENV_VARS:
        monkeypatch.delenv(env_variable.key_name, raising=False)
