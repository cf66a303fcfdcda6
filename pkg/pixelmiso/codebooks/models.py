from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, validator

from pixelmiso.antenna.fields import Array, BitMatrix
from pixelmiso.channels.beamspace import complex_gaussian

ChannelBundles = Array(complex, 4)


class TrainingReport(BaseModel):
    """
    Diagnostics of one codebook training run
    """

    objective_trace: List[float] = []
    rounds: int = 0
    converged: bool = False
    duplicates: int = 0
    repaired_cells: int = 0


class FlatCodebook(BaseModel):
    """
    M antenna coders shared by all users
    """

    codewords: BitMatrix
    report: Optional[TrainingReport] = None

    class Config:
        allow_mutation = False

    @validator("codewords")
    def check_codewords(cls, v):
        if v.shape[0] < 1:
            raise ValueError("Codebook needs at least one codeword")
        if np.any(v > 1):
            raise ValueError("Codewords must be binary")
        return v

    @property
    def size(self) -> int:
        return int(self.codewords.shape[0])

    @property
    def q(self) -> int:
        return int(self.codewords.shape[1])

    @property
    def quantization_bits(self) -> Optional[int]:
        """
        D with M = 2^D, or None when M is not a power of two
        """
        d = self.size.bit_length() - 1
        return d if 1 << d == self.size else None


class TrainingSet(BaseModel):
    """
    S channel bundles, each holding the U reduced channels of one draw
    """

    samples: ChannelBundles

    class Config:
        allow_mutation = False

    @property
    def size(self) -> int:
        return int(self.samples.shape[0])

    @classmethod
    def sample(
        cls, n_eff: int, n: int, u: int, size: int, rng: np.random.Generator
    ) -> "TrainingSet":
        """
        Draw `size` i.i.d. Rayleigh bundles

        :param n_eff: int
        :param n: int - transmit antennas
        :param u: int - users
        :param size: int - S
        :param rng: np.random.Generator
        :return: TrainingSet
        """
        return cls(samples=complex_gaussian(rng, (size, u, n_eff, n)))

    def subset(self, indices) -> "TrainingSet":
        indices = np.asarray(indices, dtype=np.int64)
        return TrainingSet(samples=self.samples[indices])


class HierarchicalCodebook(BaseModel):
    """
    A-ary tree of sub-codebooks. Layer l (1-based) holds A^(l-1)
    sub-codebooks of A codewords, stored back to back, so sub-codebook
    i of layer l occupies rows A(i-1) .. Ai-1 of `layers[l-1]`.
    """

    branching: int = Field(..., ge=2)
    layers: List[BitMatrix]
    copied: List[Tuple[int, int]] = []
    partitions: Optional[List[List[List[int]]]] = None

    class Config:
        allow_mutation = False

    @validator("layers")
    def check_layers(cls, v, values):
        a = values.get("branching")
        if a is None:
            return v
        if not v:
            raise ValueError("Hierarchical codebook needs at least one layer")
        for depth, layer in enumerate(v, start=1):
            if layer.shape[0] != a ** depth:
                raise ValueError(
                    f"Layer {depth} holds {layer.shape[0]} codewords, "
                    f"expected {a ** depth}"
                )
            if layer.shape[1] != v[0].shape[1] or np.any(layer > 1):
                raise ValueError(f"Layer {depth} has malformed codewords")
        return v

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def q(self) -> int:
        return int(self.layers[0].shape[1])

    def child_index(self, i: int, a: int) -> int:
        """
        Index in the next layer of the sub-codebook linked to codeword
        a of sub-codebook i

        :param i: int - 1-based sub-codebook index
        :param a: int - 1-based codeword index
        :return: int
        """
        return self.branching * (i - 1) + a

    def sub_codebook(self, layer: int, i: int) -> np.ndarray:
        """
        :param layer: int - 1-based layer
        :param i: int - 1-based sub-codebook index
        :return: uint8 np.ndarray of shape (A, Q)
        """
        a = self.branching
        if not 1 <= i <= a ** (layer - 1):
            raise IndexError(f"Layer {layer} has no sub-codebook {i}")
        return self.layers[layer - 1][a * (i - 1): a * i]

    def codeword(self, layer: int, i: int, a: int) -> np.ndarray:
        return self.sub_codebook(layer, i)[a - 1]

    def flat_root(self) -> FlatCodebook:
        return FlatCodebook(codewords=self.layers[0])
