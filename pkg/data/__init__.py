from .idx import dump_idx, load_idx, load_idx_file
from .dataset import (
    Batch,
    LabeledDataset,
    RegressionDataset,
    batch_iterator,
    load_mnist,
    normalize,
    subset,
)

__all__ = [
    "dump_idx",
    "load_idx",
    "load_idx_file",
    "Batch",
    "LabeledDataset",
    "RegressionDataset",
    "batch_iterator",
    "load_mnist",
    "normalize",
    "subset",
]
