import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from pixelmiso.antenna.port_model import enumerate_coders
from pixelmiso.optim.models import SeboConfig, SeboTrace
from pixelmiso.optim.utils import improves

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


def split_blocks(q: int, block_size: int) -> List[np.ndarray]:
    """
    Consecutive index blocks of size J, the last one may be shorter

    :param q: int - number of bits
    :param block_size: int - J
    :return: List[np.ndarray]
    """
    j = max(1, min(block_size, q))
    return [np.arange(start, min(start + j, q)) for start in range(0, q, j)]


class _Search:
    def __init__(self, f: Objective, cfg: SeboConfig, blocks):
        self.f = f
        self.cfg = cfg
        self.blocks = blocks
        self.patterns = {
            len(block): enumerate_coders(len(block)) for block in blocks
        }
        self.values: List[float] = []
        self.evaluations = 0
        self.exhausted = False

    def evaluate(self, b: np.ndarray) -> float:
        self.evaluations += 1
        return float(self.f(b))

    def optimize_block(
        self, b: np.ndarray, value: float, block: np.ndarray
    ) -> Tuple[np.ndarray, float]:
        incumbent = b[block].copy()
        best_bits, best_value = incumbent, value
        candidate = b.copy()
        for pattern in self.patterns[len(block)]:
            if np.array_equal(pattern, incumbent):
                continue
            candidate[block] = pattern
            v = self.evaluate(candidate)
            if v > best_value:
                best_bits, best_value = pattern, v
        b = b.copy()
        b[block] = best_bits
        return b, best_value

    def cycle(self, b: np.ndarray, value: float) -> Tuple[np.ndarray, float]:
        for _ in range(self.cfg.max_cycles):
            start = value
            for block in self.blocks:
                b, value = self.optimize_block(b, value, block)
                self.values.append(value)
            if not improves(value, start, self.cfg.tol):
                return b, value
        self.exhausted = True
        logger.debug(f"SEBO cycling stopped after {self.cfg.max_cycles}")
        return b, value


def sebo_maximize(
    f: Objective,
    q: int,
    cfg: Optional[SeboConfig] = None,
    b0: Optional[np.ndarray] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, SeboTrace]:
    """
    Maximize f over {0, 1}^q by block-cyclic exhaustive search
    followed by random bit-flip escapes.

    Inside a block the incumbent is kept unless a pattern strictly
    improves f. Each escape flips between 1 and J random bits of the
    best coder and is accepted only on strict improvement, after which
    block cycling runs again.

    :param f: objective over uint8 bit vectors of length q
    :param q: int - number of bits
    :param cfg: SeboConfig
    :param b0: Optional[np.ndarray] - starting coder, zeros by default
    :param rng: Optional[np.random.Generator] - escape randomness,
    seeded from cfg.seed by default
    :return: (best coder, SeboTrace)
    """
    cfg = cfg or SeboConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    b = (
        np.zeros(q, dtype=np.uint8)
        if b0 is None
        else np.array(b0, dtype=np.uint8)
    )
    if b.shape != (q,):
        raise ValueError(f"Start coder has shape {b.shape}, expected ({q},)")
    block_size = q if cfg.exhaustive else cfg.block_size
    search = _Search(f, cfg, split_blocks(q, block_size))

    value = search.evaluate(b)
    search.values.append(value)
    if q == 0:
        return b, SeboTrace(
            objective_values=search.values,
            evaluation_count=search.evaluations,
        )

    b, value = search.cycle(b, value)
    j = len(search.blocks[0])
    if len(search.blocks) > 1:
        for _ in range(cfg.flip_rounds):
            count = int(rng.integers(1, j + 1))
            positions = rng.choice(q, size=count, replace=False)
            candidate = b.copy()
            candidate[positions] ^= 1
            v = search.evaluate(candidate)
            if v > value:
                logger.debug(f"SEBO escape flipped {count} bits: {v:.6g}")
                b, value = candidate, v
                search.values.append(value)
                b, value = search.cycle(b, value)

    return b, SeboTrace(
        objective_values=search.values,
        evaluation_count=search.evaluations,
        budget_exhausted=search.exhausted,
    )
