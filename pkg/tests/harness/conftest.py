import pytest

from pixelmiso.harness.settings import load_config


@pytest.fixture
def config():
    return load_config(
        n=2,
        u=2,
        q=4,
        k=3,
        trials=3,
        snr_db=[0.0, 10.0],
        training_size=8,
        training_rounds=2,
        d=3,
        a=2,
        layers=2,
    )
