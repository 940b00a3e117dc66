# Third Party
import pytest


@pytest.fixture(autouse=True)
def env_setup(monkeypatch):
    monkeypatch.setenv("REQUIRED_CONFIG", "value")
    monkeypatch.delenv("QGEM_OUT_DIR", raising=False)
    monkeypatch.delenv("QGEM_CACHE_DIR", raising=False)
