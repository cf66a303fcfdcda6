import numpy as np
import pytest

from pixelmiso.antenna.port_model import enumerate_coders
from pixelmiso.codebooks.models import TrainingSet
from pixelmiso.codebooks.training import (
    lloyd_train,
    metric_matrix,
    nearest_neighbor,
    train_codebook,
    training_metric,
)
from pixelmiso.exceptions import CodebookTrainingError


def test_single_user_metric(small_antenna):
    ts = TrainingSet.sample(
        small_antenna.n_eff, 3, 1, 1, np.random.default_rng(1)
    )
    bits = [0, 1, 1, 0]
    h_eff = small_antenna.effective(bits, ts.samples[0, 0])
    expected = np.log2(1 + 10.0 * np.linalg.norm(h_eff) ** 2)
    assert np.isclose(
        training_metric(ts.samples[0], bits, 10.0, small_antenna), expected
    )


def test_metric_matrix(training_set, small_antenna):
    codewords = np.array([[0, 0, 0, 0], [1, 0, 1, 0]], dtype=np.uint8)
    metrics = metric_matrix(training_set, codewords, 10.0, small_antenna)
    assert metrics.shape == (24, 2)
    assert np.isclose(
        metrics[3, 1],
        training_metric(
            training_set.samples[3], codewords[1], 10.0, small_antenna
        ),
    )


def test_nearest_neighbor_ties_and_rank_deficiency():
    metrics = np.array([[1.0, 1.0], [-np.inf, 0.5], [2.0, -np.inf]])
    assert nearest_neighbor(metrics).tolist() == [0, 1, 0]


def test_lloyd_never_decreases(training_set, small_antenna, exhaustive):
    cb = lloyd_train(
        training_set, 2, small_antenna, sebo_cfg=exhaustive, max_rounds=5
    )
    trace = cb.report.objective_trace
    assert cb.codewords.shape == (4, 4)
    assert cb.report.rounds <= 5
    assert all(b >= a - 1e-12 for a, b in zip(trace, trace[1:]))


def test_lloyd_is_seeded(training_set, small_antenna):
    first = train_codebook(training_set, 3, small_antenna, seed=4)
    second = train_codebook(training_set, 3, small_antenna, seed=4)
    assert np.array_equal(first.codewords, second.codewords)


def test_empty_cells_are_repaired(small_antenna, exhaustive):
    ts = TrainingSet.sample(
        small_antenna.n_eff, 2, 2, 2, np.random.default_rng(3)
    )
    cb = train_codebook(
        ts, 6, small_antenna, sebo_cfg=exhaustive, max_rounds=2
    )
    assert cb.size == 6
    assert cb.report.repaired_cells > 0


def test_training_errors(training_set, small_antenna):
    with pytest.raises(CodebookTrainingError):
        train_codebook(training_set, 17, small_antenna)
    with pytest.raises(CodebookTrainingError):
        train_codebook(training_set, 2, small_antenna, rho_bar=0)
    with pytest.raises(CodebookTrainingError):
        lloyd_train(training_set, -1, small_antenna)


def test_vanishing_snr(training_set, small_antenna):
    value = training_metric(
        training_set.samples[0], [0, 1, 0, 1], 1e-12, small_antenna
    )
    assert 0 <= value < 1e-9


def test_single_codeword(training_set, small_antenna, exhaustive):
    cb = lloyd_train(training_set, 0, small_antenna, sebo_cfg=exhaustive)
    assert cb.size == 1
    assert cb.quantization_bits == 0


def test_full_codebook_serves_every_sample_best(
    training_set, small_antenna, exhaustive
):
    cb = lloyd_train(training_set, 4, small_antenna, sebo_cfg=exhaustive)
    every = enumerate_coders(4)
    best = metric_matrix(training_set, every, 10.0, small_antenna).max(axis=1)
    achieved = metric_matrix(
        training_set, cb.codewords, 10.0, small_antenna
    ).max(axis=1)
    assert np.allclose(achieved, best)
