from pixelmiso.optim.baseline import (
    conventional_system_rate,
    water_fill,
    zf_alt_optimize,
)
from pixelmiso.optim.fp_solver import (
    FpState,
    fp_alternate,
    sinr,
    sum_rate,
    surrogate_rate,
    update_coders,
    update_iota,
    update_precoder,
    update_tau,
)
from pixelmiso.optim.models import (
    FpAuxiliaries,
    FpConfig,
    PowerAllocation,
    Precoder,
    SearchConfig,
    SeboConfig,
    SeboTrace,
    SolveReport,
)
from pixelmiso.optim.sebo import sebo_maximize
from pixelmiso.optim.zf import zf_directions, zf_precoder

__all__ = [
    "FpAuxiliaries",
    "FpConfig",
    "FpState",
    "PowerAllocation",
    "Precoder",
    "SearchConfig",
    "SeboConfig",
    "SeboTrace",
    "SolveReport",
    "conventional_system_rate",
    "fp_alternate",
    "sebo_maximize",
    "sinr",
    "sum_rate",
    "surrogate_rate",
    "update_coders",
    "update_iota",
    "update_precoder",
    "update_tau",
    "water_fill",
    "zf_alt_optimize",
    "zf_directions",
    "zf_precoder",
]
