import numpy as np
import pytest

from data import dump_idx


def write_mnist(root, train_per_class=4, test_per_class=2, seed=0):
    """Tiny random IDX files laid out like the real MNIST distribution."""
    rng = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    for prefix, per_class in (("train", train_per_class), ("t10k", test_per_class)):
        labels = np.repeat(np.arange(10), per_class)
        images = rng.integers(0, 256, size=(len(labels), 28, 28)) / 255.0
        (root / f"{prefix}-images-idx3-ubyte").write_bytes(dump_idx(images))
        (root / f"{prefix}-labels-idx1-ubyte").write_bytes(dump_idx(labels))
    return root


@pytest.fixture
def mnist_dir(tmp_path):
    return write_mnist(tmp_path / "mnist")
