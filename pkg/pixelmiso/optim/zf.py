import logging
from typing import Tuple

import numpy as np

from pixelmiso.exceptions import RankDeficientChannel
from pixelmiso.optim.models import Precoder

logger = logging.getLogger(__name__)

MAX_GRAM_CONDITION = 1e12


def zf_directions(h_eff: np.ndarray) -> np.ndarray:
    """
    Unit-norm zero-forcing directions, columns of
    H^H (H H^H)^-1 normalized

    :param h_eff: complex U x N effective channel matrix, U <= N
    :return: complex N x U
    """
    h_eff = np.atleast_2d(np.asarray(h_eff, dtype=complex))
    u_count, n = h_eff.shape
    if u_count > n:
        raise RankDeficientChannel(f"{u_count} users exceed {n} antennas")
    gram = h_eff @ h_eff.conj().T
    condition = np.linalg.cond(gram)
    if not condition <= MAX_GRAM_CONDITION:
        raise RankDeficientChannel(
            f"Effective channel Gram condition number {condition:.3e}"
        )
    directions = h_eff.conj().T @ np.linalg.inv(gram)
    return directions / np.linalg.norm(directions, axis=0, keepdims=True)


def zf_precoder(h_eff: np.ndarray, p_budget: float) -> Precoder:
    """
    ZF precoder with uniform power: every column carries P/U

    :param h_eff: complex U x N effective channel matrix
    :param p_budget: float - total power P
    :return: Precoder
    """
    directions = zf_directions(h_eff)
    return Precoder(p=np.sqrt(p_budget / directions.shape[1]) * directions)


def zf_gains(h_stack: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Batched ZF effective gains |h_u p_u|^2 = 1 / [(H H^H)^-1]_uu for
    unit-norm ZF directions.

    :param h_stack: complex (..., U, N) stacked effective channels
    :return: (gains of shape (..., U), usable mask of shape (...))
    """
    h_stack = np.asarray(h_stack, dtype=complex)
    grams = h_stack @ np.conj(np.swapaxes(h_stack, -1, -2))
    conditions = np.linalg.cond(grams)
    usable = np.isfinite(conditions) & (conditions <= MAX_GRAM_CONDITION)
    safe = np.where(
        usable[..., None, None], grams, np.eye(grams.shape[-1])
    )
    inverse = np.linalg.inv(safe)
    inverse_diag = np.real(np.diagonal(inverse, axis1=-2, axis2=-1))
    gains = np.where(usable[..., None], 1 / inverse_diag, 0.0)
    return gains, usable


def uniform_zf_rate(
    h_stack: np.ndarray, p_budget: float, sigmas: np.ndarray
) -> np.ndarray:
    """
    Sum rate of ZF with uniform power for stacked effective channels;
    -inf where the stack is rank deficient

    :param h_stack: complex (..., U, N)
    :param p_budget: float
    :param sigmas: per-user noise powers, shape (U,)
    :return: float np.ndarray of shape (...)
    """
    gains, usable = zf_gains(h_stack)
    u_count = h_stack.shape[-2]
    snr = (p_budget / u_count) * gains / sigmas
    rates = np.sum(np.log2(1 + snr), axis=-1)
    return np.where(usable, rates, -np.inf)
