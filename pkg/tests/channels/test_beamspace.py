import numpy as np
import pytest
from pydantic import ValidationError

from pixelmiso.antenna.models import PatternCoder
from pixelmiso.channels.beamspace import (
    effective_channel,
    noise_powers,
    orthonormal_transmit_patterns,
    sample_reduced,
    sample_virtual,
    sample_virtual_and_reduce,
    stack_channels,
)
from pixelmiso.channels.models import VirtualChannel
from pixelmiso.exceptions import NonOrthonormalPatterns


def test_sample_reduced(rng):
    channels = sample_reduced(4, 3, 2, rng)
    assert [c.user_index for c in channels] == [0, 1]
    assert channels[0].n_eff == 4
    assert channels[0].n == 3
    assert stack_channels(channels).shape == (2, 4, 3)


def test_sample_reduced_is_seeded():
    first = sample_reduced(3, 2, 2, np.random.default_rng(1))
    second = sample_reduced(3, 2, 2, np.random.default_rng(1))
    assert np.array_equal(first[1].h_bar, second[1].h_bar)


def test_sample_reduced_rejects_empty_sizes(rng):
    with pytest.raises(ValueError):
        sample_reduced(0, 2, 2, rng)


def test_stack_channels_needs_three_dimensions():
    with pytest.raises(ValueError):
        stack_channels(np.zeros((2, 3)))


def test_noise_powers():
    assert np.array_equal(noise_powers(2.0, 3), [2.0, 2.0, 2.0])
    assert np.array_equal(noise_powers([1.0, 3.0], 2), [1.0, 3.0])
    with pytest.raises(ValueError):
        noise_powers([1.0, -1.0], 2)


def test_orthonormal_transmit_patterns(rng):
    e_t = orthonormal_transmit_patterns(3, 4, rng)
    assert e_t.shape == (6, 4)
    assert np.allclose(e_t.conj().T @ e_t, np.eye(4))
    with pytest.raises(ValueError):
        orthonormal_transmit_patterns(1, 3, rng)


def test_reduction_preserves_effective_channel(antenna, port_model):
    e_t = orthonormal_transmit_patterns(
        port_model.k, 3, np.random.default_rng(0)
    )
    reduced = sample_virtual_and_reduce(
        antenna.basis, e_t, np.random.default_rng(5), user_index=1
    )
    h_v = sample_virtual(2 * port_model.k, np.random.default_rng(5)).h_v
    bits = [1, 0, 1, 1, 0]
    full = antenna.pattern(bits) @ h_v @ e_t
    assert reduced.user_index == 1
    assert np.allclose(antenna.effective(bits, reduced.h_bar), full)


def test_non_orthonormal_patterns(antenna, port_model):
    e_t = 2 * orthonormal_transmit_patterns(
        port_model.k, 2, np.random.default_rng(0)
    )
    with pytest.raises(NonOrthonormalPatterns):
        sample_virtual_and_reduce(
            antenna.basis, e_t, np.random.default_rng(5)
        )


def test_effective_channel(reduced_channels, antenna):
    w = antenna.coder([0, 0, 1, 1, 1])
    h_eff = effective_channel(PatternCoder(w=w), reduced_channels[0])
    assert np.allclose(h_eff.h_eff, np.conj(w) @ reduced_channels[0].h_bar)


def test_virtual_channel_is_square():
    with pytest.raises(ValidationError):
        VirtualChannel(h_v=np.zeros((2, 3)))


def test_reduced_entries_are_unit_variance(antenna, port_model):
    rng = np.random.default_rng(12)
    e_t = orthonormal_transmit_patterns(port_model.k, 2, rng)
    draws = np.stack(
        [
            sample_virtual_and_reduce(antenna.basis, e_t, rng).h_bar
            for _ in range(10000)
        ]
    )
    variances = np.mean(np.abs(draws) ** 2, axis=0)
    assert np.all((variances > 0.95) & (variances < 1.05))


def test_reduced_entries_are_standard_complex_gaussian():
    h = stack_channels(sample_reduced(4, 5, 5000, np.random.default_rng(3)))
    entries = h.ravel()
    assert entries.size == 100000
    assert abs(np.mean(entries)) < 0.015
    assert abs(np.mean(np.abs(entries) ** 2) - 1) < 0.02
    assert abs(np.var(entries.real) - 0.5) < 0.01
    assert abs(np.var(entries.imag) - 0.5) < 0.01


def test_effective_channel_is_conjugate_linear(reduced_channels, rng):
    h_bar = reduced_channels[1].h_bar
    n_eff = h_bar.shape[0]
    w1 = rng.standard_normal(n_eff) + 1j * rng.standard_normal(n_eff)
    w2 = rng.standard_normal(n_eff) + 1j * rng.standard_normal(n_eff)
    a, b = 0.3 - 1.2j, -2.0 + 0.5j
    combined = effective_channel(a * w1 + b * w2, h_bar).h_eff
    expected = (
        np.conj(a) * effective_channel(w1, h_bar).h_eff
        + np.conj(b) * effective_channel(w2, h_bar).h_eff
    )
    assert np.allclose(combined, expected)
