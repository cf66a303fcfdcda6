import logging
import time
from typing import Callable, Optional, Tuple

import numpy as np

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.channels.beamspace import noise_powers, stack_channels
from pixelmiso.codebooks.models import FlatCodebook
from pixelmiso.exceptions import CandidateSearchFailure, RankDeficientChannel
from pixelmiso.optim.fp_solver import effective_rows, sinr_vector
from pixelmiso.optim.models import Precoder, SearchConfig, SolveReport
from pixelmiso.optim.utils import improves
from pixelmiso.optim.zf import uniform_zf_rate, zf_precoder

logger = logging.getLogger(__name__)

Scorer = Callable[[np.ndarray], np.ndarray]


class FlatSelector:
    def __init__(self, codebook: FlatCodebook):
        """
        One-dimensional exhaustive search over a flat codebook

        :param codebook: FlatCodebook
        """
        self.codebook = codebook

    @property
    def evaluations_per_user(self) -> int:
        return self.codebook.size

    def initial(self, rng: np.random.Generator) -> np.ndarray:
        return self.codebook.codewords[int(rng.integers(self.codebook.size))]

    def select(self, score: Scorer, u: int) -> Tuple[np.ndarray, float]:
        values = score(self.codebook.codewords)
        best = int(np.argmax(values))
        if not np.isfinite(values[best]):
            raise CandidateSearchFailure(
                f"All {self.codebook.size} candidates are rank deficient "
                f"for user {u}"
            )
        return self.codebook.codewords[best], float(values[best])


def codebook_search(
    channels,
    antenna: PixelAntenna,
    p_budget: float,
    sigmas,
    selector,
    cfg: Optional[SearchConfig] = None,
    algorithm: str = "codebook",
) -> Tuple[Precoder, np.ndarray, SolveReport]:
    """
    Successive ZF precoding and per-user codeword selection.

    Every user in turn scores its candidate codewords by the uniform
    power ZF sum rate obtained with its candidate effective channel and
    the current effective channels of the other users, then keeps the
    best one. Passes repeat until the sum rate stops improving.

    :param channels: reduced channels of all users
    :param antenna: PixelAntenna
    :param p_budget: float - total power
    :param sigmas: noise power, scalar or per user
    :param selector: candidate selector, flat or hierarchical
    :param cfg: SearchConfig
    :param algorithm: str - name recorded in the report
    :return: (Precoder, (U, Q) antenna coders, SolveReport)
    """
    cfg = cfg or SearchConfig()
    started = time.perf_counter()
    h = stack_channels(channels)
    u_count, _, n = h.shape
    if u_count > n:
        raise RankDeficientChannel(f"{u_count} users exceed {n} antennas")
    sigmas = noise_powers(sigmas, u_count)

    rng = np.random.default_rng(cfg.seed)
    coders = np.stack([selector.initial(rng) for _ in range(u_count)])
    rows = effective_rows(antenna.coders(coders), h)
    rate = float(uniform_zf_rate(rows, p_budget, sigmas))
    trace = [rate]
    objectives = []
    evaluations = 0
    converged = False
    iteration = 0
    while iteration < cfg.max_iterations:
        iteration += 1
        for u in range(u_count):

            def score(candidates: np.ndarray) -> np.ndarray:
                stacks = np.repeat(rows[None], len(candidates), axis=0)
                stacks[:, u] = np.conj(antenna.coders(candidates)) @ h[u]
                return uniform_zf_rate(stacks, p_budget, sigmas)

            bits, value = selector.select(score, u)
            evaluations += selector.evaluations_per_user
            coders[u] = bits
            rows[u] = antenna.effective(bits, h[u])
            objectives.append(value)

        new_rate = float(uniform_zf_rate(rows, p_budget, sigmas))
        trace.append(new_rate)
        logger.debug(f"{algorithm} iteration {iteration}: {new_rate:.6g}")
        if not improves(new_rate, rate, cfg.tol):
            converged = True
            break
        rate = new_rate

    precoder = zf_precoder(rows, p_budget)
    gammas = sinr_vector(rows, precoder.p, sigmas)
    trace[-1] = float(np.sum(np.log2(1 + gammas)))
    report = SolveReport(
        algorithm=algorithm,
        sum_rate_trace=trace,
        iterations=iteration,
        wall_time=time.perf_counter() - started,
        sinrs=gammas.tolist(),
        converged=converged,
        evaluations=evaluations,
        evaluations_per_user_iteration=selector.evaluations_per_user,
        objective_trace=objectives,
    )
    return precoder, coders, report


def flat_search_optimize(
    channels,
    cb: FlatCodebook,
    antenna: PixelAntenna,
    p_budget: float,
    sigmas=1.0,
    cfg: Optional[SearchConfig] = None,
) -> Tuple[Precoder, np.ndarray, SolveReport]:
    """
    Joint ZF precoding and exhaustive search over a flat codebook,
    costing M candidate evaluations per user and iteration
    """
    return codebook_search(
        channels,
        antenna,
        p_budget,
        sigmas,
        FlatSelector(cb),
        cfg,
        algorithm="codebook",
    )
