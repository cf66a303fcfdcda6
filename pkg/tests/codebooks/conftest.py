import numpy as np
import pytest

from pixelmiso.codebooks.models import TrainingSet
from pixelmiso.optim.models import SeboConfig


@pytest.fixture
def training_set(small_antenna):
    return TrainingSet.sample(
        small_antenna.n_eff, 2, 2, 24, np.random.default_rng(8)
    )


@pytest.fixture
def exhaustive():
    return SeboConfig(exhaustive=True)
