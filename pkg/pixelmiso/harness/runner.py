import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.antenna.port_model import load_port_model, synthesize_surrogate
from pixelmiso.channels.beamspace import sample_reduced, stack_channels
from pixelmiso.codebooks.hierarchy import (
    build_hierarchy,
    hierarchical_search_optimize,
)
from pixelmiso.codebooks.io import read_codebook, read_hierarchy
from pixelmiso.codebooks.models import (
    FlatCodebook,
    HierarchicalCodebook,
    TrainingSet,
)
from pixelmiso.codebooks.search import flat_search_optimize
from pixelmiso.codebooks.training import lloyd_train
from pixelmiso.exceptions import ConfigurationError, SearchCostMismatch
from pixelmiso.harness.models import (
    Algorithm,
    BenchRow,
    ResultRow,
    TrialOutcome,
)
from pixelmiso.harness.settings import ExperimentConfig
from pixelmiso.optim.baseline import conventional_system_rate, zf_alt_optimize
from pixelmiso.optim.fp_solver import fp_alternate

logger = logging.getLogger(__name__)

Codebook = Union[FlatCodebook, HierarchicalCodebook, None]

TRAINING_STREAM = 0x7261696E


def build_antenna(cfg: ExperimentConfig) -> PixelAntenna:
    """
    Antenna from the configured file, or the seeded surrogate

    :param cfg: ExperimentConfig
    :return: PixelAntenna
    """
    if cfg.antenna_path is not None:
        model = load_port_model(cfg.antenna_path)
    else:
        model = synthesize_surrogate(cfg.q, cfg.k, cfg.antenna_seed)
    antenna = PixelAntenna(model, rank_tol=cfg.rank_tol)
    logger.info(
        f"Pixel antenna Q={model.q}, K={model.k}, N_eff={antenna.n_eff}"
    )
    return antenna


def training_set(cfg: ExperimentConfig, antenna: PixelAntenna) -> TrainingSet:
    rng = np.random.default_rng(
        np.random.SeedSequence([cfg.seed, TRAINING_STREAM])
    )
    return TrainingSet.sample(
        antenna.n_eff, cfg.n, cfg.u, cfg.training_size, rng
    )


def train_flat(cfg: ExperimentConfig, antenna: PixelAntenna) -> FlatCodebook:
    return lloyd_train(
        training_set(cfg, antenna),
        cfg.d,
        antenna,
        rho_bar=cfg.rho_bar,
        sebo_cfg=cfg.sebo_config(),
        seed=cfg.seed,
        max_rounds=cfg.training_rounds,
    )


def train_tree(
    cfg: ExperimentConfig, antenna: PixelAntenna
) -> HierarchicalCodebook:
    return build_hierarchy(
        training_set(cfg, antenna),
        cfg.a,
        cfg.layers,
        antenna,
        rho_bar=cfg.rho_bar,
        sebo_cfg=cfg.sebo_config(),
        seed=cfg.seed,
        max_rounds=cfg.training_rounds,
    )


def prepare_codebook(
    cfg: ExperimentConfig, algorithm: Algorithm, antenna: PixelAntenna
) -> Codebook:
    """
    Load or train the codebook an algorithm needs

    :param cfg: ExperimentConfig
    :param algorithm: Algorithm
    :param antenna: PixelAntenna
    :return: FlatCodebook, HierarchicalCodebook or None
    """
    if algorithm == Algorithm.CODEBOOK:
        cb = (
            read_codebook(cfg.codebook_path)
            if cfg.codebook_path is not None
            else train_flat(cfg, antenna)
        )
    elif algorithm == Algorithm.HIERARCHY:
        cb = (
            read_hierarchy(cfg.codebook_path)
            if cfg.codebook_path is not None
            else train_tree(cfg, antenna)
        )
    else:
        return None
    if cb.q != antenna.q:
        raise ConfigurationError(
            f"Codebook has Q={cb.q}, antenna has Q={antenna.q}"
        )
    return cb


def channel_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(trial,))
    )


def algorithm_seed(seed: int, trial: int, snr_index: int) -> int:
    sequence = np.random.SeedSequence(seed, spawn_key=(trial, snr_index, 1))
    return int(sequence.generate_state(1)[0])


def solve(
    cfg: ExperimentConfig,
    algorithm: Algorithm,
    antenna: PixelAntenna,
    codebook: Codebook,
    channels: np.ndarray,
    p_budget: float,
    seed: int,
):
    """
    Run one algorithm on one channel draw

    :return: (sum rate, candidate evaluations per user and iteration)
    """
    if algorithm == Algorithm.CONVENTIONAL:
        rate = conventional_system_rate(
            channels[:, 0, :], p_budget, cfg.sigma2
        )
        return rate, 0.0
    if algorithm == Algorithm.FP_ALT:
        _, _, report = fp_alternate(
            channels, antenna, p_budget, cfg.sigma2, cfg.fp_config(seed)
        )
    elif algorithm == Algorithm.ZF_ALT:
        _, _, report = zf_alt_optimize(
            channels,
            antenna,
            p_budget,
            cfg.sigma2,
            cfg.sebo_config(seed),
            cfg.search_config(seed),
        )
    elif algorithm == Algorithm.CODEBOOK:
        _, _, report = flat_search_optimize(
            channels,
            codebook,
            antenna,
            p_budget,
            cfg.sigma2,
            cfg.search_config(seed),
        )
    else:
        _, _, report = hierarchical_search_optimize(
            channels,
            codebook,
            antenna,
            p_budget,
            cfg.sigma2,
            cfg.search_config(seed),
        )
    per_user = report.evaluations / (cfg.u * max(report.iterations, 1))
    return report.sum_rate, per_user


def run_trial(
    cfg: ExperimentConfig,
    algorithm: Algorithm,
    antenna: PixelAntenna,
    codebook: Codebook,
    trial: int,
    record_timing: bool,
) -> List[TrialOutcome]:
    """
    One channel draw, solved at every SNR point

    :return: List[TrialOutcome]
    """
    channels = stack_channels(
        sample_reduced(
            antenna.n_eff, cfg.n, cfg.u, channel_rng(cfg.seed, trial)
        )
    )
    outcomes = []
    for snr_index, snr_db in enumerate(cfg.snr_db):
        started = time.perf_counter()
        rate, evals = solve(
            cfg,
            algorithm,
            antenna,
            codebook,
            channels,
            cfg.p_budget(snr_db),
            algorithm_seed(cfg.seed, trial, snr_index),
        )
        elapsed = time.perf_counter() - started if record_timing else 0.0
        outcomes.append(
            TrialOutcome(
                trial=trial,
                snr_db=snr_db,
                rate=rate,
                time_s=elapsed,
                evals=evals,
            )
        )
    return outcomes


def aggregate(snr_db: float, outcomes: Sequence[TrialOutcome]) -> ResultRow:
    rates = np.array([o.rate for o in outcomes])
    stderr = (
        float(np.std(rates, ddof=1) / np.sqrt(rates.size))
        if rates.size > 1
        else 0.0
    )
    return ResultRow(
        snr_db=snr_db,
        mean_rate=float(np.mean(rates)),
        stderr=stderr,
        mean_time_s=float(np.mean([o.time_s for o in outcomes])),
        evals=float(np.mean([o.evals for o in outcomes])),
    )


def _collect(
    cfg: ExperimentConfig,
    algorithm: Algorithm,
    antenna: PixelAntenna,
    codebook: Codebook,
    record_timing: bool,
) -> Dict[int, List[TrialOutcome]]:
    trials = range(cfg.trials)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            futures = {
                t: executor.submit(
                    run_trial,
                    cfg,
                    algorithm,
                    antenna,
                    codebook,
                    t,
                    record_timing,
                )
                for t in trials
            }
            return {t: f.result() for t, f in futures.items()}
    return {
        t: run_trial(cfg, algorithm, antenna, codebook, t, record_timing)
        for t in trials
    }


def run_sweep(
    cfg: ExperimentConfig,
    algorithm: Optional[Algorithm] = None,
    antenna: Optional[PixelAntenna] = None,
    codebook: Codebook = None,
    record_timing: Optional[bool] = None,
) -> List[ResultRow]:
    """
    Monte Carlo sweep of one algorithm over the configured SNR points.

    Trial t draws its channels from a stream derived from (seed, t), so
    every SNR point and every algorithm sees the same channels.

    :param cfg: ExperimentConfig
    :param algorithm: Optional[Algorithm] - cfg.algorithm by default
    :param antenna: Optional[PixelAntenna] - built from cfg by default
    :param codebook: codebook for the search algorithms, loaded or
    trained from cfg when omitted
    :param record_timing: Optional[bool] - cfg.record_timing by default
    :return: List[ResultRow], one per SNR point
    """
    algorithm = Algorithm(algorithm or cfg.algorithm)
    if algorithm != Algorithm.FP_ALT and cfg.u > cfg.n:
        raise ConfigurationError(
            f"{algorithm.value} needs u <= n, got u={cfg.u}, n={cfg.n}"
        )
    record_timing = (
        cfg.record_timing if record_timing is None else record_timing
    )
    if antenna is None:
        antenna = build_antenna(cfg)
    if codebook is None:
        codebook = prepare_codebook(cfg, algorithm, antenna)

    by_trial = _collect(cfg, algorithm, antenna, codebook, record_timing)
    rows = []
    for snr_index, snr_db in enumerate(cfg.snr_db):
        outcomes = [by_trial[t][snr_index] for t in sorted(by_trial)]
        row = aggregate(snr_db, outcomes)
        logger.info(
            f"{algorithm.value} at {snr_db:g} dB: "
            f"{row.mean_rate:.4f} +- {row.stderr:.4f} bit/s/Hz"
        )
        rows.append(row)
    return rows


def bench(
    cfg: ExperimentConfig,
    algorithms: Optional[Sequence[Algorithm]] = None,
) -> List[BenchRow]:
    """
    Run several algorithms on identical seeded channels with timing

    :param cfg: ExperimentConfig
    :param algorithms: algorithms to compare, cfg.algorithms by default
    :return: List[BenchRow]
    """
    algorithms = [Algorithm(a) for a in (algorithms or cfg.algorithms)]
    antenna = build_antenna(cfg)
    results: Dict[Algorithm, List[ResultRow]] = {}
    for algorithm in algorithms:
        results[algorithm] = run_sweep(
            cfg, algorithm, antenna=antenna, record_timing=True
        )

    if Algorithm.CODEBOOK in results and Algorithm.HIERARCHY in results:
        tree_cost = cfg.a * cfg.layers
        flat_cost = 2 ** cfg.d
        if tree_cost < flat_cost:
            for flat, tree in zip(
                results[Algorithm.CODEBOOK], results[Algorithm.HIERARCHY]
            ):
                if not tree.evals == tree_cost < flat.evals == flat_cost:
                    raise SearchCostMismatch(
                        f"Expected {tree_cost} tree and {flat_cost} flat "
                        f"evaluations at {tree.snr_db:g} dB, got "
                        f"{tree.evals:g} and {flat.evals:g}"
                    )
            logger.info(
                f"Hierarchical search costs {tree_cost} evaluations per "
                f"user, flat search {flat_cost}"
            )

    return [
        BenchRow(algorithm=algorithm, **row.dict())
        for algorithm, rows in results.items()
        for row in rows
    ]
