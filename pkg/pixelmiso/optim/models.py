from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, validator

from pixelmiso.antenna.fields import ComplexMatrix, ComplexVector, RealVector

#: Slack allowed on power constraints
POWER_SLACK = 1e-9


class SeboConfig(BaseModel):
    """
    Successive exhaustive boolean optimization settings
    """

    block_size: int = Field(4, ge=1)
    max_cycles: int = Field(20, ge=1)
    flip_rounds: int = Field(10, ge=0)
    seed: int = 0
    tol: float = Field(1e-8, ge=0)
    exhaustive: bool = False

    class Config:
        allow_mutation = False


class SeboTrace(BaseModel):
    objective_values: List[float] = []
    evaluation_count: int = 0
    budget_exhausted: bool = False

    @validator("objective_values")
    def check_monotone(cls, v):
        if any(b < a for a, b in zip(v, v[1:])):
            raise ValueError("SEBO objective trace must be non-decreasing")
        return v


class Precoder(BaseModel):
    """
    N x U precoding matrix, one column per user
    """

    p: ComplexMatrix

    class Config:
        allow_mutation = False

    @property
    def power(self) -> float:
        return float(np.sum(np.abs(self.p) ** 2))

    def check_budget(self, p_budget: float) -> bool:
        return self.power <= p_budget + POWER_SLACK * max(1.0, p_budget)


class FpAuxiliaries(BaseModel):
    """
    Auxiliary variables of the quadratic transform
    """

    iota: RealVector
    tau: ComplexVector

    class Config:
        allow_mutation = False

    @validator("iota")
    def check_nonnegative(cls, v):
        if np.any(v < 0):
            raise ValueError("iota must be non-negative")
        return v


class FpConfig(BaseModel):
    max_iterations: int = Field(200, ge=1)
    tol: float = Field(1e-6, ge=0)
    bisect_tol: float = Field(1e-8, gt=0)
    sebo: SeboConfig = SeboConfig()

    class Config:
        allow_mutation = False


class SearchConfig(BaseModel):
    """
    Settings of the codebook based online searches
    """

    max_iterations: int = Field(20, ge=1)
    tol: float = Field(1e-6, ge=0)
    seed: int = 0

    class Config:
        allow_mutation = False


class SolveReport(BaseModel):
    """
    Trace and counters of one joint precoder/coder optimization
    """

    algorithm: str
    sum_rate_trace: List[float] = []
    iterations: int = 0
    wall_time: float = 0.0
    sinrs: List[float] = []
    converged: bool = False
    evaluations: int = 0
    evaluations_per_user_iteration: Optional[int] = None
    objective_trace: List[float] = []
    surrogate_gaps: List[float] = []
    power_trace: List[float] = []

    @property
    def sum_rate(self) -> float:
        return self.sum_rate_trace[-1] if self.sum_rate_trace else 0.0


class PowerAllocation(BaseModel):
    powers: RealVector
    water_level: float = 0.0

    class Config:
        allow_mutation = False

    @validator("powers")
    def check_nonnegative(cls, v):
        if np.any(v < 0):
            raise ValueError("Powers must be non-negative")
        return v
