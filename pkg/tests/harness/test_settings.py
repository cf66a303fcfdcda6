import pytest

from pixelmiso.exceptions import ConfigurationError
from pixelmiso.harness.models import Algorithm
from pixelmiso.harness.settings import load_config


def test_defaults_come_from_pyproject():
    config = load_config()
    assert (config.n, config.u, config.q, config.k) == (2, 2, 39, 72)
    assert config.algorithm == Algorithm.FP_ALT
    assert config.trials == 500


def test_overrides_win(tmp_path):
    path = tmp_path / "experiment.toml"
    path.write_text('q = 6\ntrials = 4\nalgorithm = "codebook"\n')
    config = load_config(path, trials=9, seed=None)
    assert config.q == 6
    assert config.trials == 9
    assert config.seed == 0
    assert config.algorithm == Algorithm.CODEBOOK


def test_environment(monkeypatch):
    monkeypatch.setenv("PIXELMISO_TRIALS", "7")
    assert load_config().trials == 7


def test_zero_forcing_needs_enough_antennas():
    with pytest.raises(ConfigurationError):
        load_config(n=1, u=2, algorithm="zf_alt")
    assert load_config(n=1, u=2, algorithm="fp_alt").u == 2


def test_invalid_values(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(snr_db=[])
    with pytest.raises(ConfigurationError):
        load_config(trials=0)
    path = tmp_path / "broken.toml"
    path.write_text("q = \n")
    with pytest.raises(ConfigurationError):
        load_config(path)


def test_derived_configs():
    config = load_config(sigma2=2.0, block_size=3, seed=5)
    assert config.p_budget(10.0) == pytest.approx(20.0)
    assert config.sebo_config().block_size == 3
    assert config.sebo_config(11).seed == 11
    assert config.fp_config().sebo.seed == 5
    assert config.search_config().max_iterations == 20
