import logging
from typing import Dict, Optional

import numpy as np

from pixelmiso.antenna.fields import as_bits
from pixelmiso.antenna.models import (
    OPEN_CIRCUIT_BETA,
    PatternBasis,
    PortModel,
)
from pixelmiso.antenna.port_model import (
    DEFAULT_RANK_TOL,
    coder_vector,
    port_currents,
    reduce_basis,
)

logger = logging.getLogger(__name__)


class PixelAntenna:
    def __init__(
        self,
        model: PortModel,
        basis: Optional[PatternBasis] = None,
        beta: float = OPEN_CIRCUIT_BETA,
        rank_tol: float = DEFAULT_RANK_TOL,
        cache_size: int = 1 << 16,
    ):
        """
        Pixel antenna shared by all users, with a memo of pattern coders

        :param model: PortModel
        :param basis: PatternBasis - reduced from the model if omitted
        :param beta: open-circuit reactance of the switches
        :param rank_tol: relative SVD threshold used when reducing
        :param cache_size: number of coders kept before the memo is reset
        """
        self.model = model
        self.basis = basis if basis is not None else reduce_basis(
            model, rank_tol
        )
        self.beta = beta
        self.cache_size = cache_size
        self._cache: Dict[bytes, np.ndarray] = {}

    @property
    def q(self) -> int:
        return self.model.q

    @property
    def n_eff(self) -> int:
        return self.basis.n_eff

    def coder(self, b) -> np.ndarray:
        """
        Pattern coder w(b) as a read-only array

        :param b: AntennaCoder or bit vector
        :return: complex np.ndarray of length N_eff
        """
        bits = as_bits(b)
        key = bits.tobytes()
        w = self._cache.get(key)
        if w is None:
            if len(self._cache) >= self.cache_size:
                logger.debug("Pattern coder cache reset")
                self._cache.clear()
            w = coder_vector(
                self.basis, port_currents(self.model, bits, self.beta)
            )
            w.setflags(write=False)
            self._cache[key] = w
        return w

    def coders(self, codewords) -> np.ndarray:
        """
        Pattern coders of several antenna coders, stacked by row

        :param codewords: array-like of shape (M, Q)
        :return: complex np.ndarray of shape (M, N_eff)
        """
        codewords = np.atleast_2d(as_bits(codewords))
        if codewords.shape[0] == 0:
            return np.empty((0, self.n_eff), dtype=complex)
        return np.stack([self.coder(c) for c in codewords])

    def effective(self, b, h_bar: np.ndarray) -> np.ndarray:
        """
        Effective channel row w(b)^H H_bar

        :param b: AntennaCoder or bit vector
        :param h_bar: complex N_eff x N matrix
        :return: complex np.ndarray of length N
        """
        return np.conj(self.coder(b)) @ h_bar

    def pattern(self, b) -> np.ndarray:
        """
        Coded radiation pattern U conj(w(b))

        :param b: AntennaCoder or bit vector
        :return: complex np.ndarray of length 2K
        """
        return self.basis.u_mat @ np.conj(self.coder(b))
