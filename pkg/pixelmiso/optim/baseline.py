import logging
import time
from typing import Optional, Tuple

import numpy as np

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.channels.beamspace import noise_powers, stack_channels
from pixelmiso.optim.fp_solver import effective_rows, sinr_vector
from pixelmiso.optim.models import (
    PowerAllocation,
    Precoder,
    SearchConfig,
    SeboConfig,
    SolveReport,
)
from pixelmiso.optim.sebo import sebo_maximize
from pixelmiso.optim.utils import improves
from pixelmiso.optim.zf import uniform_zf_rate, zf_directions, zf_precoder

logger = logging.getLogger(__name__)


def water_fill(gains, p_budget: float) -> PowerAllocation:
    """
    Water-filling over parallel channels: p_u = max(0, mu - 1/g_u)
    with sum p_u = p_budget. Channels with zero gain get no power.

    :param gains: array-like of non-negative channel gains
    :param p_budget: float - total power
    :return: PowerAllocation
    """
    gains = np.asarray(gains, dtype=float)
    powers = np.zeros_like(gains)
    positive = np.flatnonzero(gains > 0)
    if positive.size == 0 or p_budget <= 0:
        return PowerAllocation(powers=powers, water_level=0.0)

    order = positive[np.argsort(-gains[positive], kind="stable")]
    inverse = 1 / gains[order]
    level = 0.0
    active = 0
    for count in range(order.size, 0, -1):
        level = (p_budget + inverse[:count].sum()) / count
        if level > inverse[count - 1]:
            active = count
            break
    funded = order[:active]
    powers[funded] = level - inverse[:active]
    logger.debug(f"Water level {level:.6g} funds {active} channels")
    return PowerAllocation(powers=powers, water_level=level)


def conventional_system_rate(channels, p_budget: float, sigmas=1.0) -> float:
    """
    Sum rate of fixed-pattern users with ZF directions and
    water-filling power allocation

    :param channels: complex U x N matrix, one user channel per row
    :param p_budget: float - total power
    :param sigmas: noise power, scalar or per user
    :return: float
    """
    h = np.atleast_2d(np.asarray(channels, dtype=complex))
    sigmas = noise_powers(sigmas, h.shape[0])
    directions = zf_directions(h)
    gains = np.abs(np.sum(h * directions.T, axis=1)) ** 2 / sigmas
    allocation = water_fill(gains, p_budget)
    return float(np.sum(np.log2(1 + allocation.powers * gains)))


def zf_alt_optimize(
    channels,
    antenna: PixelAntenna,
    p_budget: float,
    sigmas=1.0,
    sebo_cfg: Optional[SeboConfig] = None,
    search_cfg: Optional[SearchConfig] = None,
) -> Tuple[Precoder, np.ndarray, SolveReport]:
    """
    Alternate uniform-power ZF precoding with per-user SEBO coder
    updates. Each user maximizes the ZF sum rate with the other users'
    coders frozen, starting from its current coder.

    :param channels: reduced channels of all users
    :param antenna: PixelAntenna
    :param p_budget: float - total power
    :param sigmas: noise power, scalar or per user
    :param sebo_cfg: SeboConfig
    :param search_cfg: SearchConfig - outer iteration cap and tolerance
    :return: (Precoder, (U, Q) antenna coders, SolveReport)
    """
    sebo_cfg = sebo_cfg or SeboConfig()
    search_cfg = search_cfg or SearchConfig()
    started = time.perf_counter()
    h = stack_channels(channels)
    u_count = h.shape[0]
    sigmas = noise_powers(sigmas, u_count)
    coders = np.zeros((u_count, antenna.q), dtype=np.uint8)
    rows = effective_rows(antenna.coders(coders), h)

    def rate_of(rows_: np.ndarray) -> float:
        return float(uniform_zf_rate(rows_, p_budget, sigmas))

    rate = rate_of(rows)
    trace = [rate]
    evaluations = 0
    converged = False
    iteration = 0
    rng = np.random.default_rng(sebo_cfg.seed)
    while iteration < search_cfg.max_iterations:
        iteration += 1
        for u in range(u_count):

            def objective(bits: np.ndarray) -> float:
                trial = rows.copy()
                trial[u] = antenna.effective(bits, h[u])
                return rate_of(trial)

            coders[u], sebo_trace = sebo_maximize(
                objective, antenna.q, sebo_cfg, b0=coders[u], rng=rng
            )
            rows[u] = antenna.effective(coders[u], h[u])
            evaluations += sebo_trace.evaluation_count

        new_rate = rate_of(rows)
        trace.append(new_rate)
        logger.debug(f"ZF-Alt iteration {iteration}: sum rate {new_rate:.6g}")
        if not improves(new_rate, rate, search_cfg.tol):
            converged = True
            break
        rate = new_rate

    precoder = zf_precoder(rows, p_budget)
    report = SolveReport(
        algorithm="zf_alt",
        sum_rate_trace=trace,
        iterations=iteration,
        wall_time=time.perf_counter() - started,
        sinrs=sinr_vector(rows, precoder.p, sigmas).tolist(),
        converged=converged,
        evaluations=evaluations,
    )
    return precoder, coders, report
