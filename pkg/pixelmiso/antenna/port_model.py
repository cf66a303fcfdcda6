import logging
from typing import Optional

import numpy as np
from scipy import linalg

from pixelmiso.antenna.fields import as_bits
from pixelmiso.antenna.io import PathLike, read_port_model_blocks
from pixelmiso.antenna.models import (
    OPEN_CIRCUIT_BETA,
    PatternBasis,
    PatternCoder,
    PortModel,
)
from pixelmiso.exceptions import (
    DegeneratePatternCoder,
    EmptyPatternMatrix,
    IllConditionedLoad,
    NonReciprocalNetwork,
    PassivityViolation,
    PatternDimensionMismatch,
)

logger = logging.getLogger(__name__)

RECIPROCITY_TOL = 1e-6
PASSIVITY_TOL = 1e-8
MAX_LOAD_CONDITION = 1e12
DEFAULT_RANK_TOL = 1e-6


def build_port_model(
    z: np.ndarray, e_oc: np.ndarray, q: int, k: int
) -> PortModel:
    """
    Validate raw blocks and assemble a PortModel.

    The impedance matrix is symmetrized after the reciprocity check, so
    the stored z_pp is exactly symmetric.

    :param z: (Q+1)x(Q+1) impedance matrix
    :param e_oc: 2Kx(Q+1) open-circuit pattern matrix
    :param q: int - switch count
    :param k: int - spatial sample count
    :return: PortModel
    """
    z = np.asarray(z, dtype=complex)
    e_oc = np.asarray(e_oc, dtype=complex)
    if z.shape != (q + 1, q + 1):
        raise PatternDimensionMismatch(
            f"Impedance matrix is {z.shape}, expected {(q + 1, q + 1)}"
        )
    if e_oc.shape != (2 * k, q + 1):
        raise PatternDimensionMismatch(
            f"pattern dimension mismatch: E_oc is {e_oc.shape}, "
            f"expected {(2 * k, q + 1)}"
        )

    scale = max(np.linalg.norm(z), np.finfo(float).tiny)
    asymmetry = np.linalg.norm(z - z.T) / scale
    if asymmetry > RECIPROCITY_TOL:
        raise NonReciprocalNetwork(
            f"non-reciprocal network: relative asymmetry {asymmetry:.3e}"
        )
    z = (z + z.T) / 2

    eigenvalues = np.linalg.eigvalsh(z.real)
    bound = -PASSIVITY_TOL * max(1.0, float(np.max(np.abs(eigenvalues))))
    if eigenvalues[0] < bound:
        raise PassivityViolation(
            f"Re(Z) has eigenvalue {eigenvalues[0]:.3e} below {bound:.1e}"
        )

    return PortModel(
        z_aa=z[0, 0],
        z_pa=z[1:, 0],
        z_pp=z[1:, 1:],
        e_oc=e_oc,
        q=q,
        k=k,
    )


def load_port_model(path: PathLike) -> PortModel:
    """
    Load a PortModel from a text matrix file

    :param path: file path
    :return: PortModel
    """
    q, k, z, e_oc = read_port_model_blocks(path)
    model = build_port_model(z, e_oc, q, k)
    logger.info(f"Loaded port model Q={q}, K={k} from {path}")
    return model


def synthesize_surrogate(
    q: int, k: int, seed: int, delta: float = 1.0
) -> PortModel:
    """
    Seeded random stand-in for a simulated pixel antenna.

    Z = A^T + A + delta*I from a complex Gaussian A, with the real part
    shifted so that Re(Z) is positive definite. E_oc has i.i.d.
    CN(0, 1) entries.

    :param q: int - switch count, >= 0
    :param k: int - spatial sample count, >= 1
    :param seed: int - rng seed
    :param delta: float - diagonal loading
    :return: PortModel
    """
    if q < 0 or k < 1:
        raise ValueError(f"Invalid surrogate size q={q}, k={k}")
    rng = np.random.default_rng(seed)
    size = q + 1
    a = rng.standard_normal((size, size)) + 1j * rng.standard_normal(
        (size, size)
    )
    z = a.T + a + delta * np.eye(size)
    lowest = np.linalg.eigvalsh(z.real)[0]
    z = z + (max(0.0, -lowest) + delta) * np.eye(size)
    e_oc = (
        rng.standard_normal((2 * k, size))
        + 1j * rng.standard_normal((2 * k, size))
    ) / np.sqrt(2)
    logger.debug(f"Synthesized surrogate q={q}, k={k}, seed={seed}")
    return build_port_model(z, e_oc, q, k)


def load_impedance(b, beta: float = OPEN_CIRCUIT_BETA) -> np.ndarray:
    """
    Diagonal load matrix of the pixel switches: j*beta for an open
    switch (bit 1), 0 for a closed one (bit 0)

    :param b: AntennaCoder or bit vector
    :param beta: float - open-circuit reactance
    :return: complex np.ndarray QxQ
    """
    return np.diag(1j * beta * as_bits(b).astype(float))


def port_currents(
    m: PortModel, b, beta: float = OPEN_CIRCUIT_BETA
) -> np.ndarray:
    """
    Port currents for unit antenna-port current

    :param m: PortModel
    :param b: AntennaCoder or bit vector
    :param beta: float - open-circuit reactance
    :return: complex np.ndarray of length Q+1
    """
    bits = as_bits(b)
    if bits.shape != (m.q,):
        raise PatternDimensionMismatch(
            f"Coder has {bits.shape[0]} bits, antenna has {m.q} switches"
        )
    if m.q == 0:
        return np.ones(1, dtype=complex)
    loaded = m.z_pp + load_impedance(bits, beta)
    condition = np.linalg.cond(loaded)
    if not condition <= MAX_LOAD_CONDITION:
        raise IllConditionedLoad(
            f"z_pp + Z_L has condition number {condition:.3e}"
        )
    pixel = linalg.solve(loaded, m.z_pa, assume_a="sym")
    return np.concatenate(([1.0 + 0j], -pixel))


def reduce_basis(
    m: PortModel, rank_tol: float = DEFAULT_RANK_TOL
) -> PatternBasis:
    """
    Truncated SVD of E_oc

    :param m: PortModel
    :param rank_tol: float - relative singular value threshold in (0, 1)
    :return: PatternBasis
    """
    if not 0 < rank_tol < 1:
        raise ValueError(f"rank_tol must be in (0, 1), got {rank_tol}")
    u, s, vh = linalg.svd(m.e_oc, full_matrices=False)
    if s.size == 0 or s[0] <= 0:
        raise EmptyPatternMatrix("E_oc has no positive singular value")
    n_eff = int(np.count_nonzero(s > rank_tol * s[0]))
    logger.debug(f"Pattern basis rank {n_eff} of {s.size}")
    return PatternBasis(
        u_mat=u[:, :n_eff],
        s_diag=s[:n_eff],
        v_mat=vh[:n_eff].conj().T,
        n_eff=n_eff,
    )


def coder_vector(basis: PatternBasis, currents: np.ndarray) -> np.ndarray:
    """
    Unit-norm pattern coder for given port currents

    :param basis: PatternBasis
    :param currents: complex np.ndarray of length Q+1
    :return: complex np.ndarray of length N_eff
    """
    w = basis.s_diag * (basis.v_mat.T @ np.conj(currents))
    norm = np.linalg.norm(w)
    scale = basis.s_diag[0] * np.linalg.norm(currents)
    if not norm > 1e-12 * scale:
        raise DegeneratePatternCoder(
            f"Pattern coder norm {norm:.3e} is zero relative to {scale:.3e}"
        )
    return w / norm


def pattern_coder(
    basis: PatternBasis, m: PortModel, b, beta: float = OPEN_CIRCUIT_BETA
) -> PatternCoder:
    """
    w = S V^T conj(i(b)), normalized

    :param basis: PatternBasis derived from m
    :param m: PortModel
    :param b: AntennaCoder or bit vector
    :param beta: float - open-circuit reactance
    :return: PatternCoder
    """
    return PatternCoder(w=coder_vector(basis, port_currents(m, b, beta)))


def radiation_pattern(
    m: PortModel,
    b,
    basis: Optional[PatternBasis] = None,
    beta: float = OPEN_CIRCUIT_BETA,
) -> np.ndarray:
    """
    Coded radiation pattern e(b) = U conj(w(b)), unit norm

    :param m: PortModel
    :param b: AntennaCoder or bit vector
    :param basis: Optional[PatternBasis] - computed from m when omitted
    :param beta: float - open-circuit reactance
    :return: complex np.ndarray of length 2K
    """
    if basis is None:
        basis = reduce_basis(m)
    w = pattern_coder(basis, m, b, beta).w
    return basis.u_mat @ np.conj(w)


def enumerate_coders(q: int) -> np.ndarray:
    """
    All 2^q antenna coders in index order, bit 0 as the most significant

    :param q: int
    :return: uint8 np.ndarray of shape (2^q, q)
    """
    indices = np.arange(2 ** q, dtype=np.int64)[:, None]
    shifts = np.arange(q - 1, -1, -1, dtype=np.int64)[None, :]
    return ((indices >> shifts) & 1).astype(np.uint8)
