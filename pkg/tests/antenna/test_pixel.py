import numpy as np
import pytest

from pixelmiso.antenna.models import AntennaCoder
from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.antenna.port_model import radiation_pattern


def test_coder_is_memoized(antenna):
    first = antenna.coder([1, 0, 0, 1, 0])
    second = antenna.coder(AntennaCoder(bits=[1, 0, 0, 1, 0]))
    assert first is second
    with pytest.raises(ValueError):
        first[0] = 0


def test_cache_is_reset_when_full(port_model):
    antenna = PixelAntenna(port_model, cache_size=2)
    first = antenna.coder([0, 0, 0, 0, 0])
    antenna.coder([0, 0, 0, 0, 1])
    antenna.coder([0, 0, 0, 1, 0])
    assert len(antenna._cache) == 1
    assert np.array_equal(antenna.coder([0, 0, 0, 0, 0]), first)


def test_coders_stack(antenna):
    codewords = np.array([[0, 0, 0, 0, 0], [1, 1, 1, 1, 1]])
    w = antenna.coders(codewords)
    assert w.shape == (2, antenna.n_eff)
    assert np.array_equal(w[1], antenna.coder(codewords[1]))
    assert antenna.coders(np.empty((0, 5))).shape == (0, antenna.n_eff)


def test_effective_channel(antenna, rng):
    h_bar = rng.standard_normal((antenna.n_eff, 3))
    bits = [0, 1, 0, 1, 1]
    expected = np.conj(antenna.coder(bits)) @ h_bar
    assert np.allclose(antenna.effective(bits, h_bar), expected)


def test_pattern(antenna, port_model):
    bits = [0, 1, 1, 1, 0]
    assert np.allclose(
        antenna.pattern(bits), radiation_pattern(port_model, bits)
    )
