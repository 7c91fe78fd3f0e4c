from dataclasses import dataclass

import numpy as np
from scipy.special import softmax
from scipy.stats import entropy

import config
from errors import UsageError
from .network import Model


@dataclass
class PredictiveSummary:
    """Monte Carlo E[y] and diag Cov[y] per input row."""

    mean: np.ndarray
    variance: np.ndarray
    sample_count: int


def _passes(model: Model, x: np.ndarray, T: int, rng: np.random.Generator):
    indices = model.enumerate_indices()
    if indices is None:
        indices = (model.draw_index(rng, batch_size=x.shape[0]) for _ in range(T))
    for z in indices:
        yield model.forward(x, z).data


def predictive_moments(model: Model, x, T: int = config.MC_SAMPLES, rng: np.random.Generator | None = None) -> PredictiveSummary:
    """mean = (1/T) Σ F_d(x, m, z_i); variance = (1/T) Σ (mean - F_d(x, m, z_i))²."""
    if T < 1:
        raise UsageError(f"need at least one predictive sample, got T={T}")
    rng = rng if rng is not None else np.random.default_rng(config.DEFAULT_SEED)
    x = np.asarray(x, dtype=np.float64)
    outputs = np.stack(list(_passes(model, x, T, rng)))
    mean = outputs.mean(axis=0)
    variance = ((outputs - mean) ** 2).mean(axis=0)
    return PredictiveSummary(mean, variance, outputs.shape[0])


def predictive_class_probabilities(
    model: Model,
    x,
    T: int = config.CLASSIFY_MC_SAMPLES,
    rng: np.random.Generator | None = None,
    batch_size: int = 500,
) -> np.ndarray:
    """Average of softmax(logits) over T indexed passes, computed chunk by chunk."""
    if T < 1:
        raise UsageError(f"need at least one predictive sample, got T={T}")
    rng = rng if rng is not None else np.random.default_rng(config.DEFAULT_SEED)
    x = np.asarray(x, dtype=np.float64)
    chunks = []
    for start in range(0, x.shape[0], batch_size):
        part = x[start:start + batch_size]
        probs = [softmax(logits, axis=1) for logits in _passes(model, part, T, rng)]
        chunks.append(np.mean(probs, axis=0))
    return np.concatenate(chunks) if chunks else np.zeros((0, *model.architecture.output_shape))


def predictive_entropy(probabilities: np.ndarray) -> np.ndarray:
    """Shannon entropy (nats) of each row of class probabilities."""
    return entropy(probabilities, axis=1)
