import numpy as np
import pytest

from pixelmiso.antenna.models import PatternCoder
from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.antenna.port_model import enumerate_coders, synthesize_surrogate
from pixelmiso.channels.beamspace import sample_reduced, stack_channels
from pixelmiso.exceptions import PatternDimensionMismatch
from pixelmiso.optim import fp_solver
from pixelmiso.optim.fp_solver import (
    FpState,
    coder_objective,
    effective_rows,
    fp_alternate,
    matched_filter,
    optimal_precoder,
    sinr,
    sum_rate,
    surrogate_rate,
    update_coders,
    update_iota,
    update_precoder,
    update_tau,
)
from pixelmiso.optim.models import FpConfig, SeboConfig
from pixelmiso.optim.sebo import sebo_maximize


@pytest.fixture
def state(small_antenna, small_channels):
    rows = np.conj(small_antenna.coder([0, 0, 0, 0])) @ small_channels
    return FpState(
        small_channels, small_antenna, matched_filter(rows, 10.0), 1.0
    )


def test_sinr_of_single_user(small_antenna, rng):
    channel = sample_reduced(small_antenna.n_eff, 2, 1, rng)[0]
    w = small_antenna.coder([1, 0, 0, 1])
    h_eff = np.conj(w) @ channel.h_bar
    p = h_eff.conj()[:, None]
    expected = np.linalg.norm(h_eff) ** 4 / 0.5
    assert np.isclose(sinr(p, w, channel, 0.5), expected)
    with pytest.raises(ValueError):
        sinr(p, w, channel, 0.0)


def test_sum_rate_accepts_pattern_coders(state, small_antenna):
    coders = [PatternCoder(w=w) for w in state.w]
    assert np.isclose(
        sum_rate(state.p, coders, state.h, 1.0), state.sum_rate()
    )


def test_surrogate_is_tight(state):
    update_iota(state)
    update_tau(state)
    assert np.isclose(surrogate_rate(state), state.sum_rate(), rtol=1e-10)
    auxiliaries = state.auxiliaries()
    assert np.all(auxiliaries.iota >= 0)


def test_precoder_update_respects_budget(state):
    update_iota(state)
    update_tau(state)
    before = surrogate_rate(state)
    precoder = update_precoder(state, 10.0)
    assert precoder.check_budget(10.0)
    assert surrogate_rate(state) >= before


def test_optimal_precoder_binding(rng):
    a = 1e-3 * np.eye(2)
    rhs = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    p, mu = optimal_precoder(a, rhs, 1.0, 1e-8)
    power = np.sum(np.abs(p) ** 2)
    assert mu > 0
    assert 1.0 - 1e-7 <= power <= 1.0 + 1e-9
    assert np.allclose(p, np.linalg.solve(a + mu * np.eye(2), rhs))


def test_optimal_precoder_inactive(rng):
    rhs = 0.1 * rng.standard_normal((2, 2))
    p, mu = optimal_precoder(np.eye(2), rhs, 10.0, 1e-8)
    assert mu == 0
    assert np.allclose(p, rhs)


def test_optimal_precoder_zero_target():
    p, mu = optimal_precoder(np.eye(2), np.zeros((2, 2)), 1.0, 1e-8)
    assert not np.any(p)


def test_coder_update_never_decreases_objective(state):
    update_iota(state)
    update_tau(state)
    update_precoder(state, 10.0)
    before = [coder_objective(state, u)(state.coders[u]) for u in range(2)]
    _, evaluations = update_coders(state, SeboConfig(block_size=2))
    after = [coder_objective(state, u)(state.coders[u]) for u in range(2)]
    assert evaluations > 0
    assert all(b >= a for a, b in zip(before, after))


def test_fp_alternate_is_monotone(small_antenna, small_channels):
    _, coders, report = fp_alternate(
        small_channels, small_antenna, 10.0, cfg=FpConfig(max_iterations=30)
    )
    trace = report.sum_rate_trace
    assert coders.shape == (2, 4)
    assert report.algorithm == "fp_alt"
    assert report.iterations <= 30
    assert all(b >= a - 1e-9 * abs(a) for a, b in zip(trace, trace[1:]))
    assert all(p <= 10.0 * (1 + 1e-9) for p in report.power_trace)
    scale = max(1.0, max(trace))
    assert all(gap < 1e-8 * scale for gap in report.surrogate_gaps)
    rates = np.log2(1 + np.array(report.sinrs))
    assert np.isclose(report.sum_rate, rates.sum())


@pytest.mark.parametrize("seed", range(40))
def test_fp_single_user_matches_enumeration(small_antenna, seed):
    rng = np.random.default_rng(seed)
    channels = sample_reduced(small_antenna.n_eff, 1, 1, rng)
    h = channels[0].h_bar
    gains = [
        np.abs(small_antenna.effective(bits, h)[0]) ** 2
        for bits in enumerate_coders(small_antenna.q)
    ]
    best = np.log2(1 + 5.0 * max(gains))
    _, _, report = fp_alternate(channels, small_antenna, 5.0)
    assert report.sum_rate_trace[0] <= report.sum_rate + 1e-6
    assert abs(report.sum_rate - best) < 1e-6


def test_fp_rejects_wrong_coder_length(small_antenna, small_channels):
    state = FpState(
        small_channels,
        small_antenna,
        np.zeros((3, 2)),
        1.0,
        coders=np.zeros((2, 3)),
    )
    with pytest.raises(PatternDimensionMismatch):
        state.sum_rate()


def test_coder_update_reaches_best_of_all_coders(rng):
    antenna = PixelAntenna(synthesize_surrogate(q=6, k=4, seed=21))
    h = stack_channels(sample_reduced(antenna.n_eff, 3, 2, rng))
    zero_coders = np.zeros((2, 6), dtype=np.uint8)
    rows = effective_rows(antenna.coders(zero_coders), h)
    state = FpState(h, antenna, matched_filter(rows, 10.0), 1.0, zero_coders)
    update_iota(state)
    update_tau(state)
    update_precoder(state, 10.0)
    update_coders(state, SeboConfig(exhaustive=True))
    for u in range(2):
        objective = coder_objective(state, u)
        best = max(objective(bits) for bits in enumerate_coders(6))
        assert np.isclose(objective(state.coders[u]), best, rtol=1e-12)


def test_users_share_one_escape_generator(
    monkeypatch, small_antenna, small_channels
):
    generators = []

    def recording_sebo(*args, rng=None, **kwargs):
        generators.append(rng)
        return sebo_maximize(*args, rng=rng, **kwargs)

    monkeypatch.setattr(fp_solver, "sebo_maximize", recording_sebo)
    fp_alternate(
        small_channels, small_antenna, 10.0, cfg=FpConfig(max_iterations=3)
    )
    assert len(generators) >= 2
    assert all(g is generators[0] for g in generators)
    assert isinstance(generators[0], np.random.Generator)


@pytest.mark.parametrize("seed", range(100))
def test_fp_trace_is_monotone_on_random_channels(small_antenna, seed):
    rng = np.random.default_rng(seed)
    channels = sample_reduced(small_antenna.n_eff, 3, 2, rng)
    _, _, report = fp_alternate(channels, small_antenna, 10.0)
    trace = report.sum_rate_trace
    assert all(b >= a - 1e-9 * abs(a) for a, b in zip(trace, trace[1:]))
    assert all(p <= 10.0 * (1 + 1e-9) for p in report.power_trace)


@pytest.mark.parametrize("seed", range(100))
def test_binding_precoder_spends_the_budget(seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    a = x @ x.conj().T
    rhs = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    budget = 0.5 * np.sum(np.abs(np.linalg.solve(a, rhs)) ** 2)
    p, mu = optimal_precoder(a, rhs, budget, 1e-8)
    assert mu > 0
    assert abs(np.sum(np.abs(p) ** 2) - budget) <= 1e-6 * budget
