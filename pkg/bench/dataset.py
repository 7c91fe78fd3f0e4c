import numpy as np

from data import RegressionDataset
from oracle import GPPosterior, gp_posterior, gp_prior_sample
from tensor import RngStream
from .config import BenchConfig


def generate_regression_dataset(cfg: BenchConfig, stream: RngStream) -> tuple[RegressionDataset, RegressionDataset]:
    """Train set y = f(x) + ε and a test set holding the noiseless f(x).

    f is one joint draw of the NNGP prior over the stacked train and test
    inputs, so both sets come from the same function.
    """
    rng = stream.generator()
    n_train = cfg.train_size
    X = rng.standard_normal((n_train + cfg.n_test, cfg.input_dim))
    f = gp_prior_sample(X, cfg.oracle, 0.0, rng)
    y_train = f[:n_train] + cfg.noise_std * rng.standard_normal(n_train)
    return (
        RegressionDataset(X[:n_train], y_train),
        RegressionDataset(X[n_train:], f[n_train:]),
    )


def oracle_posterior(cfg: BenchConfig, train: RegressionDataset, test: RegressionDataset) -> GPPosterior:
    return gp_posterior(train.inputs, np.asarray(train.targets), test.inputs, cfg.oracle, cfg.noise_variance)
