import numpy as np
from pydantic import BaseModel, validator

from pixelmiso.antenna.fields import (
    BitVector,
    ComplexMatrix,
    ComplexScalar,
    ComplexVector,
    RealVector,
)

#: Open-circuit reactance used for switches in the "off" state
OPEN_CIRCUIT_BETA = 1e10


class PortModel(BaseModel):
    """
    (Q+1)-port network model of a pixel antenna.

    Port 0 is the antenna port, ports 1..Q are the pixel ports.
    """

    z_aa: ComplexScalar
    z_pa: ComplexVector
    z_pp: ComplexMatrix
    e_oc: ComplexMatrix
    q: int
    k: int

    class Config:
        allow_mutation = False

    @property
    def z_full(self) -> np.ndarray:
        """
        Full (Q+1)x(Q+1) impedance matrix

        :return: np.ndarray
        """
        z = np.empty((self.q + 1, self.q + 1), dtype=complex)
        z[0, 0] = self.z_aa
        z[0, 1:] = self.z_pa
        z[1:, 0] = self.z_pa
        z[1:, 1:] = self.z_pp
        return z


class AntennaCoder(BaseModel):
    """
    Switch states of one pixel antenna
    """

    bits: BitVector

    class Config:
        allow_mutation = False

    @validator("bits")
    def check_binary(cls, v):
        if np.any(v > 1):
            raise ValueError("Antenna coder entries must be 0 or 1")
        return v

    @property
    def q(self) -> int:
        return int(self.bits.shape[0])

    def key(self) -> bytes:
        return self.bits.tobytes()

    def __str__(self):
        return "".join(str(int(bit)) for bit in self.bits)

    @classmethod
    def from_string(cls, line: str) -> "AntennaCoder":
        return cls(bits=[int(ch) for ch in line.strip()])

    @classmethod
    def zeros(cls, q: int) -> "AntennaCoder":
        return cls(bits=np.zeros(q, dtype=np.uint8))


class PatternBasis(BaseModel):
    """
    Truncated SVD factors of the open-circuit pattern matrix
    """

    u_mat: ComplexMatrix
    s_diag: RealVector
    v_mat: ComplexMatrix
    n_eff: int

    class Config:
        allow_mutation = False

    @property
    def s_mat(self) -> np.ndarray:
        return np.diag(self.s_diag)


class PatternCoder(BaseModel):
    """
    Unit-norm coefficients over the orthonormal pattern basis
    """

    w: ComplexVector

    class Config:
        allow_mutation = False
