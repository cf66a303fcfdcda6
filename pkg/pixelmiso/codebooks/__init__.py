from pixelmiso.codebooks.hierarchy import (
    build_hierarchy,
    hierarchical_search_optimize,
    leaf_from_index,
)
from pixelmiso.codebooks.io import (
    read_codebook,
    read_hierarchy,
    write_codebook,
    write_hierarchy,
)
from pixelmiso.codebooks.models import (
    FlatCodebook,
    HierarchicalCodebook,
    TrainingReport,
    TrainingSet,
)
from pixelmiso.codebooks.search import flat_search_optimize
from pixelmiso.codebooks.training import (
    lloyd_train,
    metric_matrix,
    train_codebook,
    training_metric,
)

__all__ = [
    "FlatCodebook",
    "HierarchicalCodebook",
    "TrainingReport",
    "TrainingSet",
    "build_hierarchy",
    "flat_search_optimize",
    "hierarchical_search_optimize",
    "leaf_from_index",
    "lloyd_train",
    "metric_matrix",
    "read_codebook",
    "read_hierarchy",
    "train_codebook",
    "training_metric",
    "write_codebook",
    "write_hierarchy",
]
