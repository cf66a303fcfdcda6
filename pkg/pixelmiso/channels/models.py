from pydantic import BaseModel, validator

from pixelmiso.antenna.fields import ComplexMatrix, ComplexVector


class ReducedChannel(BaseModel):
    """
    N_eff x N channel of one user in the pattern basis
    """

    h_bar: ComplexMatrix
    user_index: int = 0

    class Config:
        allow_mutation = False

    @property
    def n_eff(self) -> int:
        return int(self.h_bar.shape[0])

    @property
    def n(self) -> int:
        return int(self.h_bar.shape[1])


class EffectiveChannel(BaseModel):
    """
    1 x N channel seen through a pattern coder
    """

    h_eff: ComplexVector

    class Config:
        allow_mutation = False


class VirtualChannel(BaseModel):
    """
    2K x 2K beamspace channel, used to cross-check the reduced model
    """

    h_v: ComplexMatrix

    class Config:
        allow_mutation = False

    @validator("h_v")
    def check_square(cls, v):
        if v.shape[0] != v.shape[1]:
            raise ValueError(f"Virtual channel must be square, got {v.shape}")
        return v
