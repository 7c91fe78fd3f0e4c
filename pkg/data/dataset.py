import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from errors import DimensionError, UsageError
from .idx import load_idx_file

logger = logging.getLogger(__name__)

MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


@dataclass(frozen=True)
class LabeledDataset:
    inputs: np.ndarray
    labels: np.ndarray
    class_count: int

    def __post_init__(self):
        if len(self.inputs) != len(self.labels):
            raise DimensionError(f"{len(self.inputs)} inputs but {len(self.labels)} labels")
        if len(self.labels) < 1:
            raise UsageError("a labeled dataset needs at least one sample")
        if self.labels.min() < 0 or self.labels.max() >= self.class_count:
            raise UsageError(f"labels must lie in [0, {self.class_count})")

    @property
    def targets(self) -> np.ndarray:
        return self.labels

    def __len__(self):
        return len(self.labels)

    def take(self, indices: np.ndarray) -> "LabeledDataset":
        return LabeledDataset(self.inputs[indices], self.labels[indices], self.class_count)


@dataclass(frozen=True)
class RegressionDataset:
    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        if len(self.inputs) != len(self.targets):
            raise DimensionError(f"{len(self.inputs)} inputs but {len(self.targets)} targets")

    def __len__(self):
        return len(self.targets)


@dataclass(frozen=True)
class Batch:
    inputs: np.ndarray
    targets: np.ndarray
    indices: np.ndarray

    def __len__(self):
        return len(self.indices)


def batch_iterator(dataset, batch_size: int, shuffle_rng: np.random.Generator | None = None) -> Iterator[Batch]:
    """One epoch of batches over a permutation of the dataset; the last batch may be short."""
    if batch_size < 1:
        raise UsageError(f"batch_size must be >= 1, got {batch_size}")
    n = len(dataset)
    order = shuffle_rng.permutation(n) if shuffle_rng is not None else np.arange(n)
    for start in range(0, n, batch_size):
        idx = order[start:start + batch_size]
        yield Batch(dataset.inputs[idx], dataset.targets[idx], idx)


def subset(dataset: LabeledDataset, n: int, rng: np.random.Generator) -> LabeledDataset:
    """Stratified sample of n items without replacement."""
    total = len(dataset)
    if not 1 <= n <= total:
        raise UsageError(f"subset size must lie in [1, {total}], got {n}")
    if n == total:
        return dataset

    classes, counts = np.unique(dataset.labels, return_counts=True)
    quotas = counts * n / total
    alloc = np.floor(quotas).astype(int)
    # largest remainders take the leftover slots
    for k in np.argsort(-(quotas - alloc), kind="stable")[: n - alloc.sum()]:
        alloc[k] += 1

    picked = []
    for cls, take in zip(classes, alloc):
        members = np.flatnonzero(dataset.labels == cls)
        picked.append(rng.choice(members, size=take, replace=False))
    return dataset.take(np.sort(np.concatenate(picked)))


def normalize(dataset: LabeledDataset, mean: float | None = None, std: float | None = None) -> LabeledDataset:
    """Standardize inputs with the given (or the dataset's own) mean and std."""
    mean = float(dataset.inputs.mean()) if mean is None else mean
    std = float(dataset.inputs.std()) if std is None else std
    if std <= 0:
        raise UsageError("cannot normalize inputs with zero spread")
    return LabeledDataset((dataset.inputs - mean) / std, dataset.labels, dataset.class_count)


def _find(root: Path, name: str) -> Path:
    for candidate in (root / name, root / f"{name}.gz"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"MNIST file {name}[.gz] not found in {root}")


def load_mnist(root: Path, split: str = "train") -> LabeledDataset:
    if split not in MNIST_FILES:
        raise UsageError(f"unknown MNIST split '{split}'")
    root = Path(root)
    images_name, labels_name = MNIST_FILES[split]
    images = load_idx_file(_find(root, images_name))
    labels = load_idx_file(_find(root, labels_name))
    logger.info(f"Loaded MNIST {split}: {len(labels)} images from {root}")
    return LabeledDataset(images[:, None, :, :], labels, 10)
