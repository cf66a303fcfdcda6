import logging
from typing import Optional

import numpy as np

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.antenna.port_model import enumerate_coders
from pixelmiso.codebooks.models import (
    FlatCodebook,
    TrainingReport,
    TrainingSet,
)
from pixelmiso.exceptions import CodebookTrainingError
from pixelmiso.optim.models import SeboConfig
from pixelmiso.optim.sebo import sebo_maximize
from pixelmiso.optim.utils import improves
from pixelmiso.optim.zf import zf_gains

logger = logging.getLogger(__name__)

DEFAULT_RHO_BAR = 10.0
MAX_ROUNDS = 50
TRAINING_TOL = 1e-6
ENUMERATION_LIMIT = 12


def _bundle_rates(
    samples: np.ndarray, w: np.ndarray, rho_bar: float
) -> np.ndarray:
    """
    :param samples: complex (S, U, N_eff, N)
    :param w: complex (M, N_eff) pattern coders
    :param rho_bar: float
    :return: float (S, M) metric, -inf where ZF is rank deficient
    """
    h_eff = np.einsum("me,suen->smun", np.conj(w), samples)
    gains, usable = zf_gains(h_eff)
    rates = np.sum(np.log2(1 + rho_bar * gains), axis=-1)
    return np.where(usable, rates, -np.inf)


def training_metric(
    sample: np.ndarray,
    codeword,
    rho_bar: float,
    antenna: PixelAntenna,
) -> float:
    """
    Sum rate proxy of one channel bundle when every user applies the
    same codeword and the transmitter uses unit-norm ZF directions

    :param sample: complex (U, N_eff, N) reduced channels
    :param codeword: AntennaCoder or bit vector
    :param rho_bar: float - training SNR, > 0
    :param antenna: PixelAntenna
    :return: float, -inf when the effective channels are rank deficient
    """
    if rho_bar <= 0:
        raise ValueError("rho_bar must be positive")
    w = antenna.coder(codeword)[None, :]
    return float(_bundle_rates(np.asarray(sample)[None], w, rho_bar)[0, 0])


def metric_matrix(
    ts: TrainingSet,
    codewords: np.ndarray,
    rho_bar: float,
    antenna: PixelAntenna,
) -> np.ndarray:
    """
    Training metric of every (sample, codeword) pair

    :param ts: TrainingSet
    :param codewords: uint8 (M, Q)
    :param rho_bar: float
    :param antenna: PixelAntenna
    :return: float (S, M)
    """
    return _bundle_rates(ts.samples, antenna.coders(codewords), rho_bar)


def _scores(metrics: np.ndarray) -> np.ndarray:
    return np.where(np.isfinite(metrics), metrics, 0.0)


def nearest_neighbor(metrics: np.ndarray) -> np.ndarray:
    """
    Index of the best codeword per sample, lowest index on ties

    :param metrics: float (S, M)
    :return: int (S,)
    """
    return np.argmax(_scores(metrics), axis=1)


def _cell_objective(
    samples: np.ndarray, rho_bar: float, antenna: PixelAntenna
):
    def objective(bits: np.ndarray) -> float:
        w = antenna.coder(bits)[None, :]
        return float(np.mean(_scores(_bundle_rates(samples, w, rho_bar))))

    return objective


def _initial_codewords(
    q: int, m: int, rng: np.random.Generator
) -> np.ndarray:
    if q <= ENUMERATION_LIMIT:
        chosen = rng.choice(2 ** q, size=m, replace=False)
        return enumerate_coders(q)[chosen]
    codewords = []
    seen = set()
    while len(codewords) < m:
        bits = rng.integers(0, 2, size=q, dtype=np.uint8)
        if bits.tobytes() not in seen:
            seen.add(bits.tobytes())
            codewords.append(bits)
    return np.stack(codewords)


def _sebo_rng(seed: int, round_index: int, cell: int):
    return np.random.default_rng(
        np.random.SeedSequence([seed, round_index, cell])
    )


def train_codebook(
    ts: TrainingSet,
    m: int,
    antenna: PixelAntenna,
    rho_bar: float = DEFAULT_RHO_BAR,
    sebo_cfg: Optional[SeboConfig] = None,
    seed: int = 0,
    max_rounds: int = MAX_ROUNDS,
    tol: float = TRAINING_TOL,
) -> FlatCodebook:
    """
    Generalized Lloyd training of an M-word codebook.

    Alternates the nearest-neighbor partition of the training set with
    centroid updates, each centroid being the SEBO maximizer of the mean
    metric over its cell started from the current codeword. A codeword
    whose cell is empty is moved to the SEBO maximizer of the sample
    that is worst served by the current codebook.

    :param ts: TrainingSet
    :param m: int - number of codewords, 1 <= m <= 2^Q
    :param antenna: PixelAntenna
    :param rho_bar: float - training SNR
    :param sebo_cfg: SeboConfig - `exhaustive=True` enumerates all coders
    :param seed: int
    :param max_rounds: int
    :param tol: float - relative gain below which training stops
    :return: FlatCodebook with its TrainingReport
    """
    sebo_cfg = sebo_cfg or SeboConfig()
    q = antenna.q
    if ts.size < 1:
        raise CodebookTrainingError("Training set is empty")
    if not 1 <= m <= 2 ** q:
        raise CodebookTrainingError(
            f"Cannot train {m} distinct codewords with Q={q}"
        )
    if rho_bar <= 0:
        raise CodebookTrainingError("rho_bar must be positive")

    rng = np.random.default_rng(seed)
    codewords = _initial_codewords(q, m, rng)
    trace = []
    repaired = 0
    converged = False
    rounds = 0
    while True:
        metrics = metric_matrix(ts, codewords, rho_bar, antenna)
        labels = nearest_neighbor(metrics)
        scores = _scores(metrics)
        objective = float(np.mean(scores[np.arange(ts.size), labels]))
        trace.append(objective)
        logger.debug(f"Lloyd round {rounds}: mean metric {objective:.6g}")
        if len(trace) > 1 and not improves(trace[-1], trace[-2], tol):
            converged = True
            break
        if rounds == max_rounds:
            break
        rounds += 1

        best = scores.max(axis=1)
        for cell in range(m):
            members = np.flatnonzero(labels == cell)
            if members.size == 0:
                members = np.array([int(np.argmin(best))])
                repaired += 1
            codewords[cell], _ = sebo_maximize(
                _cell_objective(ts.samples[members], rho_bar, antenna),
                q,
                sebo_cfg,
                b0=codewords[cell],
                rng=_sebo_rng(seed, rounds, cell),
            )

    duplicates = m - len({c.tobytes() for c in codewords})
    if duplicates:
        logger.info(f"Trained codebook holds {duplicates} duplicate words")
    logger.info(
        f"Trained {m} codewords in {rounds} rounds, "
        f"mean metric {trace[-1]:.6g}"
    )
    report = TrainingReport(
        objective_trace=trace,
        rounds=rounds,
        converged=converged,
        duplicates=duplicates,
        repaired_cells=repaired,
    )
    return FlatCodebook(codewords=codewords, report=report)


def lloyd_train(
    ts: TrainingSet,
    d: int,
    antenna: PixelAntenna,
    rho_bar: float = DEFAULT_RHO_BAR,
    sebo_cfg: Optional[SeboConfig] = None,
    seed: int = 0,
    max_rounds: int = MAX_ROUNDS,
    tol: float = TRAINING_TOL,
) -> FlatCodebook:
    """
    Train a codebook of M = 2^D codewords

    :param d: int - quantization bits D
    """
    if d < 0:
        raise CodebookTrainingError(f"Quantization bits must be >= 0: {d}")
    return train_codebook(
        ts,
        2 ** d,
        antenna,
        rho_bar=rho_bar,
        sebo_cfg=sebo_cfg,
        seed=seed,
        max_rounds=max_rounds,
        tol=tol,
    )
