import numpy as np
import pytest

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.antenna.port_model import synthesize_surrogate
from pixelmiso.channels.beamspace import sample_reduced, stack_channels


@pytest.fixture
def port_model():
    return synthesize_surrogate(q=5, k=6, seed=3)


@pytest.fixture
def antenna(port_model):
    return PixelAntenna(port_model)


@pytest.fixture
def small_antenna():
    return PixelAntenna(synthesize_surrogate(q=4, k=3, seed=11))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def reduced_channels(antenna, rng):
    return sample_reduced(antenna.n_eff, 3, 2, rng)


@pytest.fixture
def small_channels(small_antenna, rng):
    return stack_channels(sample_reduced(small_antenna.n_eff, 3, 2, rng))
