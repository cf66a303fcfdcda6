from pixelmiso.antenna import (
    AntennaCoder,
    PixelAntenna,
    PortModel,
    synthesize_surrogate,
)
from pixelmiso.codebooks import (
    FlatCodebook,
    HierarchicalCodebook,
    build_hierarchy,
    hierarchical_search_optimize,
    flat_search_optimize,
    lloyd_train,
)
from pixelmiso.harness import ExperimentConfig, bench, run_sweep
from pixelmiso.optim import fp_alternate, zf_alt_optimize

__version__ = "1.0.0"
__all__ = [
    # Antenna
    "AntennaCoder",
    "PixelAntenna",
    "PortModel",
    "synthesize_surrogate",
    # Optimization
    "fp_alternate",
    "zf_alt_optimize",
    # Codebooks
    "FlatCodebook",
    "HierarchicalCodebook",
    "lloyd_train",
    "build_hierarchy",
    "flat_search_optimize",
    "hierarchical_search_optimize",
    # Experiments
    "ExperimentConfig",
    "run_sweep",
    "bench",
]
