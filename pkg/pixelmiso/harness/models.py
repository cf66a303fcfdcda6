from enum import Enum

from pydantic import BaseModel, validator


class Algorithm(str, Enum):
    FP_ALT = "fp_alt"
    ZF_ALT = "zf_alt"
    CODEBOOK = "codebook"
    HIERARCHY = "hierarchy"
    CONVENTIONAL = "conventional"


ZF_ALGORITHMS = {
    Algorithm.ZF_ALT,
    Algorithm.CODEBOOK,
    Algorithm.HIERARCHY,
    Algorithm.CONVENTIONAL,
}


class TrialOutcome(BaseModel):
    """
    Result of one algorithm on one channel draw at one SNR point
    """

    trial: int
    snr_db: float
    rate: float
    time_s: float = 0.0
    evals: float = 0.0


class ResultRow(BaseModel):
    """
    Aggregate over all trials of one SNR point
    """

    snr_db: float
    mean_rate: float
    stderr: float
    mean_time_s: float
    evals: float

    @validator("stderr")
    def check_stderr(cls, v):
        if v < 0:
            raise ValueError("Standard error must be non-negative")
        return v


class BenchRow(ResultRow):
    algorithm: Algorithm
