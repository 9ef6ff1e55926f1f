import pytest

from logiscale import ComputeLawParams

from .synth import CHINCHILLA


@pytest.fixture
def chinchilla():
    return CHINCHILLA


@pytest.fixture
def compute_law():
    return ComputeLawParams(E=1.69, K=50.0, kappa=0.063)
