"""Global pytest configuration: auto-use fixtures."""

import pytest
import condlab as cl
from condlab.core.random import SEED_ENV


@pytest.fixture(autouse=True)
def reset_condlab_config(monkeypatch):
    """Reset global condlab configuration and the seed environment around every test."""
    monkeypatch.delenv(SEED_ENV, raising=False)
    cl.reset_config()
    yield
    cl.reset_config()


@pytest.fixture
def standard_params():
    """alpha = 2, beta = 1/4, p0 = point mass at 1/2; condensate gamma = 1/2."""
    return cl.kingman.ModelParams.standard()
