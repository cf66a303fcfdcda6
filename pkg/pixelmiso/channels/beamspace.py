import logging
from typing import List, Sequence, Union

import numpy as np
from scipy import linalg

from pixelmiso.antenna.models import PatternBasis, PatternCoder
from pixelmiso.channels.models import (
    EffectiveChannel,
    ReducedChannel,
    VirtualChannel,
)
from pixelmiso.exceptions import NonOrthonormalPatterns

logger = logging.getLogger(__name__)

ORTHONORMALITY_TOL = 1e-8


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """
    i.i.d. CN(0, 1) samples

    :param rng: np.random.Generator
    :param shape: output shape
    :return: complex np.ndarray
    """
    return (
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    ) / np.sqrt(2)


def sample_reduced(
    n_eff: int, n: int, u_count: int, rng: np.random.Generator
) -> List[ReducedChannel]:
    """
    Draw i.i.d. Rayleigh reduced channels for all users

    :param n_eff: int - effective aerial degrees of freedom
    :param n: int - transmit antennas
    :param u_count: int - users
    :param rng: np.random.Generator
    :return: List[ReducedChannel]
    """
    if min(n_eff, n, u_count) < 1:
        raise ValueError(
            f"Channel sizes must be positive, got {(n_eff, n, u_count)}"
        )
    draws = complex_gaussian(rng, (u_count, n_eff, n))
    return [
        ReducedChannel(h_bar=draws[u], user_index=u) for u in range(u_count)
    ]


def stack_channels(
    channels: Union[Sequence[ReducedChannel], np.ndarray]
) -> np.ndarray:
    """
    :param channels: reduced channels of all users, or an already
    stacked array
    :return: complex np.ndarray of shape (U, N_eff, N)
    """
    if isinstance(channels, np.ndarray):
        stack = channels.astype(complex, copy=False)
    else:
        stack = np.stack(
            [getattr(c, "h_bar", c) for c in channels]
        ).astype(complex, copy=False)
    if stack.ndim != 3:
        raise ValueError(f"Expected (U, N_eff, N) channels, got {stack.shape}")
    return stack


def noise_powers(sigma2, u_count: int) -> np.ndarray:
    """
    Per-user noise powers from a scalar or a length-U sequence

    :param sigma2: float or sequence of floats
    :param u_count: int
    :return: float np.ndarray of length U
    """
    sigmas = np.broadcast_to(np.asarray(sigma2, dtype=float), (u_count,))
    if np.any(sigmas <= 0):
        raise ValueError("Noise powers must be positive")
    return sigmas.copy()


def orthonormal_transmit_patterns(
    k: int, n: int, rng: np.random.Generator
) -> np.ndarray:
    """
    Orthonormal 2K x N transmit pattern matrix from QR of a random matrix

    :param k: int - spatial samples
    :param n: int - transmit antennas, at most 2K
    :param rng: np.random.Generator
    :return: complex np.ndarray
    """
    if n > 2 * k:
        raise ValueError(f"Cannot fit {n} orthonormal patterns in 2K={2 * k}")
    q_mat, _ = linalg.qr(complex_gaussian(rng, (2 * k, n)), mode="economic")
    return q_mat


def sample_virtual(size: int, rng: np.random.Generator) -> VirtualChannel:
    return VirtualChannel(h_v=complex_gaussian(rng, (size, size)))


def sample_virtual_and_reduce(
    basis: PatternBasis,
    e_t: np.ndarray,
    rng: np.random.Generator,
    user_index: int = 0,
) -> ReducedChannel:
    """
    Sample a full beamspace channel and reduce it: H_bar = U^T H_v E_T

    :param basis: PatternBasis
    :param e_t: complex 2K x N transmit patterns with orthonormal columns
    :param rng: np.random.Generator
    :param user_index: int
    :return: ReducedChannel
    """
    e_t = np.asarray(e_t, dtype=complex)
    gram = e_t.conj().T @ e_t
    deviation = np.max(np.abs(gram - np.eye(gram.shape[0])))
    if deviation > ORTHONORMALITY_TOL:
        raise NonOrthonormalPatterns(
            f"Transmit patterns deviate from orthonormal by {deviation:.3e}"
        )
    h_v = sample_virtual(e_t.shape[0], rng).h_v
    return ReducedChannel(
        h_bar=basis.u_mat.T @ h_v @ e_t, user_index=user_index
    )


def effective_channel(
    w: Union[PatternCoder, np.ndarray],
    h_bar: Union[ReducedChannel, np.ndarray],
) -> EffectiveChannel:
    """
    h_eff = w^H H_bar

    :param w: PatternCoder or coder vector
    :param h_bar: ReducedChannel or N_eff x N matrix
    :return: EffectiveChannel
    """
    w = getattr(w, "w", w)
    h_bar = getattr(h_bar, "h_bar", h_bar)
    return EffectiveChannel(h_eff=np.conj(w) @ h_bar)
