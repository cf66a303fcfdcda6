import logging
from typing import List, Optional, Tuple

import numpy as np

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.codebooks.models import HierarchicalCodebook, TrainingSet
from pixelmiso.codebooks.search import Scorer, codebook_search
from pixelmiso.codebooks.training import (
    DEFAULT_RHO_BAR,
    MAX_ROUNDS,
    TRAINING_TOL,
    metric_matrix,
    nearest_neighbor,
    train_codebook,
)
from pixelmiso.exceptions import CandidateSearchFailure, CodebookTrainingError
from pixelmiso.optim.models import (
    Precoder,
    SearchConfig,
    SeboConfig,
    SolveReport,
)

logger = logging.getLogger(__name__)


def leaf_from_index(i: int, a: int) -> Tuple[int, int]:
    """
    Split a 1-based codeword index of a layer into its sub-codebook and
    in-sub-codebook position: position mod(i, A), or A when the
    remainder is zero

    :param i: int - 1-based index over the whole layer
    :param a: int - branching A
    :return: (sub-codebook index, position), both 1-based
    """
    position = i % a if i % a != 0 else a
    return (i - position) // a + 1, position


def child_seed(seed: int, layer: int, index: int) -> int:
    sequence = np.random.SeedSequence([seed, layer, index])
    return int(sequence.generate_state(1)[0])


def build_hierarchy(
    ts: TrainingSet,
    a: int,
    n_layers: int,
    antenna: PixelAntenna,
    rho_bar: float = DEFAULT_RHO_BAR,
    sebo_cfg: Optional[SeboConfig] = None,
    seed: int = 0,
    max_rounds: int = MAX_ROUNDS,
    tol: float = TRAINING_TOL,
) -> HierarchicalCodebook:
    """
    Build an A-ary, L-layer hierarchical codebook.

    The root sub-codebook is trained on the whole set. The training set
    of every sub-codebook is split by nearest neighbor among its A
    codewords, and the cell of codeword a of sub-codebook i trains the
    child sub-codebook A(i-1)+a of the next layer. A child with an empty
    cell repeats its parent codeword A times and is recorded in
    `copied`.

    :param ts: TrainingSet
    :param a: int - branching A >= 2
    :param n_layers: int - layers L >= 1
    :param antenna: PixelAntenna
    :param rho_bar: float - training SNR
    :param sebo_cfg: SeboConfig
    :param seed: int - root seed, children use derived seeds
    :param max_rounds: int
    :param tol: float
    :return: HierarchicalCodebook
    """
    if a < 2 or n_layers < 1:
        raise CodebookTrainingError(f"Invalid tree shape A={a}, L={n_layers}")
    root = train_codebook(
        ts,
        a,
        antenna,
        rho_bar=rho_bar,
        sebo_cfg=sebo_cfg,
        seed=seed,
        max_rounds=max_rounds,
        tol=tol,
    )
    layers: List[np.ndarray] = [root.codewords]
    partitions: List[List[List[int]]] = [[list(range(ts.size))]]
    copied: List[Tuple[int, int]] = []

    for layer in range(1, n_layers):
        parents = layers[-1]
        next_words = np.empty((a ** (layer + 1), antenna.q), dtype=np.uint8)
        next_sets: List[List[int]] = []
        for i, members in enumerate(partitions[-1], start=1):
            words = parents[a * (i - 1): a * i]
            members = np.asarray(members, dtype=np.int64)
            labels = (
                nearest_neighbor(
                    metric_matrix(ts.subset(members), words, rho_bar, antenna)
                )
                if members.size
                else np.empty(0, dtype=np.int64)
            )
            for position in range(1, a + 1):
                child = a * (i - 1) + position
                cell = members[labels == position - 1]
                next_sets.append(cell.tolist())
                rows = slice(a * (child - 1), a * child)
                if cell.size == 0:
                    next_words[rows] = words[position - 1]
                    copied.append((layer + 1, child))
                    continue
                next_words[rows] = train_codebook(
                    ts.subset(cell),
                    a,
                    antenna,
                    rho_bar=rho_bar,
                    sebo_cfg=sebo_cfg,
                    seed=child_seed(seed, layer + 1, child),
                    max_rounds=max_rounds,
                    tol=tol,
                ).codewords
        layers.append(next_words)
        partitions.append(next_sets)
        logger.info(
            f"Layer {layer + 1}: {a ** layer} sub-codebooks trained, "
            f"{sum(1 for c in copied if c[0] == layer + 1)} copied"
        )

    return HierarchicalCodebook(
        branching=a, layers=layers, copied=copied, partitions=partitions
    )


class TreeSelector:
    def __init__(self, hc: HierarchicalCodebook):
        """
        Root-to-leaf descent costing A candidate evaluations per layer

        :param hc: HierarchicalCodebook
        """
        self.hc = hc
        self.last_path: List[int] = []

    @property
    def evaluations_per_user(self) -> int:
        return self.hc.branching * self.hc.n_layers

    def initial(self, rng: np.random.Generator) -> np.ndarray:
        return self.hc.layers[0][int(rng.integers(self.hc.branching))]

    def select(self, score: Scorer, u: int) -> Tuple[np.ndarray, float]:
        a = self.hc.branching
        i = 1
        value = -np.inf
        path = []
        for layer in range(1, self.hc.n_layers + 1):
            candidates = self.hc.sub_codebook(layer, i)
            values = score(candidates)
            best = int(np.argmax(values))
            if not np.isfinite(values[best]):
                raise CandidateSearchFailure(
                    f"All candidates of sub-codebook ({layer}, {i}) are "
                    f"rank deficient for user {u}"
                )
            value = float(values[best])
            i = (i - 1) * a + best + 1
            path.append(i)
        self.last_path = path

        sub_index, position = leaf_from_index(i, a)
        bits = self.hc.codeword(self.hc.n_layers, sub_index, position)
        if not np.array_equal(bits, self.hc.layers[-1][i - 1]):
            raise CandidateSearchFailure(
                f"Leaf ({sub_index}, {position}) does not match codeword "
                f"{i} of the last layer"
            )
        return bits, value


def hierarchical_search_optimize(
    channels,
    hc: HierarchicalCodebook,
    antenna: PixelAntenna,
    p_budget: float,
    sigmas=1.0,
    cfg: Optional[SearchConfig] = None,
) -> Tuple[Precoder, np.ndarray, SolveReport]:
    """
    Joint ZF precoding and layered codebook descent, costing A*L
    candidate evaluations per user and iteration
    """
    return codebook_search(
        channels,
        antenna,
        p_budget,
        sigmas,
        TreeSelector(hc),
        cfg,
        algorithm="hierarchy",
    )
