import numpy as np
import pytest

from data import LabeledDataset, RegressionDataset, batch_iterator, load_mnist, normalize, subset
from errors import DimensionError, UsageError


def labeled(n=50, classes=5):
    rng = np.random.default_rng(0)
    return LabeledDataset(rng.standard_normal((n, 3)), np.arange(n) % classes, classes)


def test_load_mnist(mnist_dir):
    train = load_mnist(mnist_dir, "train")
    test = load_mnist(mnist_dir, "test")
    assert train.inputs.shape == (40, 1, 28, 28)
    assert len(test) == 20
    assert train.class_count == 10
    assert 0.0 <= train.inputs.min() and train.inputs.max() <= 1.0


def test_load_mnist_missing_files(tmp_path):
    with pytest.raises(FileNotFoundError, match="train-images-idx3-ubyte"):
        load_mnist(tmp_path, "train")


def test_load_mnist_unknown_split(mnist_dir):
    with pytest.raises(UsageError):
        load_mnist(mnist_dir, "validation")


def test_batches_cover_dataset_once():
    data = labeled(23)
    batches = list(batch_iterator(data, 5, np.random.default_rng(1)))
    assert [len(b) for b in batches] == [5, 5, 5, 5, 3]
    seen = np.concatenate([b.indices for b in batches])
    assert sorted(seen) == list(range(23))
    assert np.array_equal(batches[0].inputs, data.inputs[batches[0].indices])


def test_batches_without_shuffle_keep_order():
    data = RegressionDataset(np.arange(6.0).reshape(6, 1), np.arange(6.0))
    first = next(batch_iterator(data, 4))
    assert list(first.indices) == [0, 1, 2, 3]


def test_batch_size_must_be_positive():
    with pytest.raises(UsageError):
        list(batch_iterator(labeled(), 0))


def test_subset_is_stratified():
    data = labeled(100, 4)
    picked = subset(data, 20, np.random.default_rng(2))
    assert len(picked) == 20
    assert list(np.bincount(picked.labels)) == [5, 5, 5, 5]
    assert len(np.unique(picked.inputs, axis=0)) == 20


def test_subset_bounds():
    with pytest.raises(UsageError):
        subset(labeled(10), 11, np.random.default_rng(0))
    with pytest.raises(UsageError):
        subset(labeled(10), 0, np.random.default_rng(0))


def test_normalize_uses_given_statistics():
    data = labeled()
    out = normalize(data, mean=1.0, std=2.0)
    assert np.allclose(out.inputs, (data.inputs - 1.0) / 2.0)
    own = normalize(data)
    assert own.inputs.mean() == pytest.approx(0.0, abs=1e-12)
    assert own.inputs.std() == pytest.approx(1.0)


def test_dataset_validation():
    with pytest.raises(DimensionError):
        LabeledDataset(np.zeros((3, 2)), np.zeros(2, dtype=int), 2)
    with pytest.raises(UsageError):
        LabeledDataset(np.zeros((2, 2)), np.array([0, 5]), 2)
    with pytest.raises(DimensionError):
        RegressionDataset(np.zeros((3, 1)), np.zeros(4))
