import logging
import time
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.channels.beamspace import noise_powers, stack_channels
from pixelmiso.exceptions import BisectionBracketFailure
from pixelmiso.optim.models import (
    FpAuxiliaries,
    FpConfig,
    Precoder,
    SeboConfig,
    SolveReport,
)
from pixelmiso.optim.sebo import sebo_maximize
from pixelmiso.optim.utils import frobenius_power, improves

logger = logging.getLogger(__name__)

MU_START = 1e-12
MU_LIMIT = 1e12
MAX_BISECTIONS = 200


def _coder_matrix(coders, n_eff: int) -> np.ndarray:
    w = np.stack([getattr(c, "w", c) for c in coders]).astype(complex)
    if w.shape[1] != n_eff:
        raise ValueError(f"Pattern coders have length {w.shape[1]}")
    return w


def effective_rows(w: np.ndarray, h_stack: np.ndarray) -> np.ndarray:
    """
    Effective channels of all users, row u is w_u^H H_bar_u

    :param w: complex (U, N_eff) pattern coders
    :param h_stack: complex (U, N_eff, N) reduced channels
    :return: complex (U, N)
    """
    return np.einsum("ue,uen->un", np.conj(w), h_stack)


def sinr_vector(
    h_eff: np.ndarray, p: np.ndarray, sigmas: np.ndarray
) -> np.ndarray:
    gains = np.abs(h_eff @ p) ** 2
    signal = np.diag(gains)
    interference = gains.sum(axis=1) - signal
    return signal / (np.maximum(interference, 0.0) + sigmas)


def sinr(p, w_u, h_bar_u, sigma2: float, u: Optional[int] = None) -> float:
    """
    SINR of one user

    :param p: Precoder or N x U matrix
    :param w_u: PatternCoder or coder vector of user u
    :param h_bar_u: ReducedChannel or N_eff x N matrix of user u
    :param sigma2: float - noise power, > 0
    :param u: Optional[int] - user index, taken from the ReducedChannel
    when omitted
    :return: float
    """
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    if u is None:
        u = getattr(h_bar_u, "user_index", 0)
    p = np.asarray(getattr(p, "p", p), dtype=complex)
    w = getattr(w_u, "w", w_u)
    h_eff = np.conj(w) @ getattr(h_bar_u, "h_bar", h_bar_u)
    gains = np.abs(h_eff @ p) ** 2
    interference = gains.sum() - gains[u]
    return float(gains[u] / (max(interference, 0.0) + sigma2))


def sum_rate(p, coders: Sequence, channels, sigmas) -> float:
    """
    Sum rate in bit/s/Hz

    :param p: Precoder or N x U matrix
    :param coders: pattern coders (PatternCoder or vectors), one per user
    :param channels: reduced channels of all users
    :param sigmas: noise power, scalar or per user
    :return: float
    """
    h_stack = stack_channels(channels)
    p = np.asarray(getattr(p, "p", p), dtype=complex)
    w = _coder_matrix(coders, h_stack.shape[1])
    gammas = sinr_vector(
        effective_rows(w, h_stack), p, noise_powers(sigmas, len(h_stack))
    )
    return float(np.sum(np.log2(1 + gammas)))


class FpState:
    def __init__(
        self,
        channels,
        antenna: PixelAntenna,
        p: np.ndarray,
        sigmas,
        coders: Optional[np.ndarray] = None,
    ):
        """
        Variables of the alternating fractional programming solve

        :param channels: reduced channels of all users
        :param antenna: PixelAntenna shared by all users
        :param p: N x U precoder
        :param sigmas: noise power, scalar or per user
        :param coders: (U, Q) antenna coders, all-zero by default
        """
        self.h = stack_channels(channels)
        self.antenna = antenna
        u_count = self.h.shape[0]
        self.sigmas = noise_powers(sigmas, u_count)
        self.coders = (
            np.zeros((u_count, antenna.q), dtype=np.uint8)
            if coders is None
            else np.array(coders, dtype=np.uint8)
        )
        self.p = np.array(p, dtype=complex)
        self.iota = np.zeros(u_count)
        self.tau = np.zeros(u_count, dtype=complex)

    @property
    def u_count(self) -> int:
        return self.h.shape[0]

    @property
    def w(self) -> np.ndarray:
        return self.antenna.coders(self.coders)

    @property
    def h_eff(self) -> np.ndarray:
        return effective_rows(self.w, self.h)

    def sinrs(self) -> np.ndarray:
        return sinr_vector(self.h_eff, self.p, self.sigmas)

    def sum_rate(self) -> float:
        return float(np.sum(np.log2(1 + self.sinrs())))

    def auxiliaries(self) -> FpAuxiliaries:
        return FpAuxiliaries(iota=self.iota, tau=self.tau)


def _surrogate_terms(
    g: np.ndarray, iota: np.ndarray, tau: np.ndarray, sigmas: np.ndarray
) -> float:
    totals = np.sum(np.abs(g) ** 2, axis=1) + sigmas
    direct = np.diag(g)
    terms = (
        np.log1p(iota)
        - iota
        + 2 * np.sqrt(1 + iota) * np.real(np.conj(tau) * direct)
        - np.abs(tau) ** 2 * totals
    )
    return float(np.sum(terms) / np.log(2))


def surrogate_rate(state: FpState, p: Optional[np.ndarray] = None) -> float:
    """
    Quadratic-transform surrogate in bit/s/Hz; equals the sum rate when
    iota and tau hold their closed-form values

    :param state: FpState
    :param p: Optional[np.ndarray] - precoder to evaluate instead of
    state.p
    :return: float
    """
    p = state.p if p is None else p
    g = state.h_eff @ p
    return _surrogate_terms(g, state.iota, state.tau, state.sigmas)


def update_iota(state: FpState) -> np.ndarray:
    state.iota = state.sinrs()
    return state.iota


def update_tau(state: FpState) -> np.ndarray:
    g = state.h_eff @ state.p
    totals = np.sum(np.abs(g) ** 2, axis=1) + state.sigmas
    state.tau = np.sqrt(1 + state.iota) * np.diag(g) / totals
    return state.tau


def _solve_shifted(a: np.ndarray, rhs: np.ndarray, mu: float) -> np.ndarray:
    n = a.shape[0]
    shifted = a + mu * np.eye(n)
    try:
        factor = linalg.cho_factor(shifted)
    except linalg.LinAlgError:
        delta = 1e-12 * max(np.trace(a).real / n, 1.0)
        logger.debug(f"Regularizing precoder solve with {delta:.1e}")
        factor = linalg.cho_factor(shifted + delta * np.eye(n))
    return linalg.cho_solve(factor, rhs)


def optimal_precoder(
    a: np.ndarray, rhs: np.ndarray, p_budget: float, bisect_tol: float
) -> Tuple[np.ndarray, float]:
    """
    argmax of sum_u 2Re{a_u^H p_u} - p_u^H A p_u s.t. ||P||_F^2 <= budget

    :param a: N x N Hermitian positive semidefinite matrix A
    :param rhs: N x U matrix of the vectors a_u
    :param p_budget: float - total power budget
    :param bisect_tol: float - relative tolerance on the binding power
    :return: (P, mu)
    """
    if not np.any(rhs):
        return np.zeros_like(rhs), 0.0
    p = linalg.pinvh(a) @ rhs
    if frobenius_power(p) <= p_budget:
        return p, 0.0

    low, high = 0.0, MU_START
    p_high = _solve_shifted(a, rhs, high)
    while frobenius_power(p_high) > p_budget:
        low, high = high, 2 * high
        if high > MU_LIMIT:
            raise BisectionBracketFailure(
                f"Lagrange multiplier exceeds {MU_LIMIT:.0e}"
            )
        p_high = _solve_shifted(a, rhs, high)

    for _ in range(MAX_BISECTIONS):
        if p_budget - frobenius_power(p_high) < bisect_tol * p_budget:
            break
        mid = (low + high) / 2
        p_mid = _solve_shifted(a, rhs, mid)
        if frobenius_power(p_mid) > p_budget:
            low = mid
        else:
            high, p_high = mid, p_mid
    return p_high, high


def update_precoder(
    state: FpState, p_budget: float, bisect_tol: float = 1e-8
) -> Precoder:
    """
    Closed-form precoder update with bisection on the power multiplier.
    The update is kept only if the surrogate does not decrease.

    :param state: FpState
    :param p_budget: float - total power budget
    :param bisect_tol: float
    :return: Precoder
    """
    h_eff = state.h_eff
    weights = np.abs(state.tau) ** 2
    a = h_eff.conj().T @ (weights[:, None] * h_eff)
    a = (a + a.conj().T) / 2
    rhs = h_eff.conj().T * (np.sqrt(1 + state.iota) * state.tau)[None, :]
    candidate, mu = optimal_precoder(a, rhs, p_budget, bisect_tol)
    if surrogate_rate(state, candidate) >= surrogate_rate(state):
        state.p = candidate
        logger.debug(f"Precoder updated, mu={mu:.3e}")
    return Precoder(p=state.p)


def coder_objective(state: FpState, u: int):
    """
    Per-user coder objective 2|w^H q_u| - w^H Q_u w with frozen iota, tau
    and P. The phase of tau_u is taken at its optimum for each w, which
    leaves the SINR unchanged.

    :param state: FpState
    :param u: int - user index
    :return: callable on bit vectors
    """
    h_p = state.h[u] @ state.p
    big_q = np.abs(state.tau[u]) ** 2 * (h_p @ h_p.conj().T)
    small_q = np.sqrt(1 + state.iota[u]) * np.conj(state.tau[u]) * h_p[:, u]
    antenna = state.antenna

    def objective(bits: np.ndarray) -> float:
        w = antenna.coder(bits)
        return float(
            2 * np.abs(np.vdot(w, small_q))
            - np.real(np.vdot(w, big_q @ w))
        )

    return objective


def update_coders(
    state: FpState,
    sebo_cfg: Optional[SeboConfig] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, int]:
    """
    SEBO update of every user's antenna coder, started from the current
    coder so the per-user objective never decreases

    :param state: FpState
    :param sebo_cfg: SeboConfig
    :param rng: Optional[np.random.Generator] - escape randomness shared
    by all users, seeded from sebo_cfg.seed by default
    :return: (coders, objective evaluations)
    """
    sebo_cfg = sebo_cfg or SeboConfig()
    rng = rng if rng is not None else np.random.default_rng(sebo_cfg.seed)
    evaluations = 0
    coders = state.coders.copy()
    for u in range(state.u_count):
        bits, trace = sebo_maximize(
            coder_objective(state, u),
            state.antenna.q,
            sebo_cfg,
            b0=state.coders[u],
            rng=rng,
        )
        coders[u] = bits
        evaluations += trace.evaluation_count
    state.coders = coders
    return coders, evaluations


def matched_filter(h_eff: np.ndarray, p_budget: float) -> np.ndarray:
    """
    Matched-filter precoder H_eff^H scaled to the full budget

    :param h_eff: complex (U, N)
    :param p_budget: float
    :return: complex N x U
    """
    p = h_eff.conj().T
    power = frobenius_power(p)
    if power == 0:
        return np.zeros_like(p)
    return p * np.sqrt(p_budget / power)


def fp_alternate(
    channels,
    antenna: PixelAntenna,
    p_budget: float,
    sigmas=1.0,
    cfg: Optional[FpConfig] = None,
) -> Tuple[Precoder, np.ndarray, SolveReport]:
    """
    Alternate the iota, tau, P and B updates until the relative sum-rate
    improvement drops below cfg.tol.

    Starts from all-zero antenna coders and the matched filter at full
    power.

    :param channels: reduced channels of all users
    :param antenna: PixelAntenna
    :param p_budget: float - total transmit power
    :param sigmas: noise power, scalar or per user
    :param cfg: FpConfig
    :return: (Precoder, (U, Q) antenna coders, SolveReport)
    """
    cfg = cfg or FpConfig()
    started = time.perf_counter()
    h = stack_channels(channels)
    zero_coders = np.zeros((h.shape[0], antenna.q), dtype=np.uint8)
    h_eff = effective_rows(antenna.coders(zero_coders), h)
    state = FpState(
        h, antenna, matched_filter(h_eff, p_budget), sigmas, zero_coders
    )

    rate = state.sum_rate()
    trace = [rate]
    gaps = []
    powers = []
    evaluations = 0
    converged = False
    iteration = 0
    rng = np.random.default_rng(cfg.sebo.seed)
    while iteration < cfg.max_iterations:
        iteration += 1
        update_iota(state)
        update_tau(state)
        gaps.append(abs(surrogate_rate(state) - rate))
        update_precoder(state, p_budget, cfg.bisect_tol)
        powers.append(frobenius_power(state.p))
        _, count = update_coders(state, cfg.sebo, rng)
        evaluations += count

        new_rate = state.sum_rate()
        trace.append(new_rate)
        logger.debug(f"FP iteration {iteration}: sum rate {new_rate:.6g}")
        if not improves(new_rate, rate, cfg.tol):
            rate = new_rate
            converged = True
            break
        rate = new_rate

    report = SolveReport(
        algorithm="fp_alt",
        sum_rate_trace=trace,
        iterations=iteration,
        wall_time=time.perf_counter() - started,
        sinrs=state.sinrs().tolist(),
        converged=converged,
        evaluations=evaluations,
        surrogate_gaps=gaps,
        power_trace=powers,
    )
    return Precoder(p=state.p), state.coders.copy(), report
