from pixelmiso.harness.models import (
    Algorithm,
    BenchRow,
    ResultRow,
    TrialOutcome,
)
from pixelmiso.harness.runner import bench, build_antenna, run_sweep
from pixelmiso.harness.settings import ExperimentConfig, load_config

__all__ = [
    "Algorithm",
    "BenchRow",
    "ExperimentConfig",
    "ResultRow",
    "TrialOutcome",
    "bench",
    "build_antenna",
    "load_config",
    "run_sweep",
]
