from typing import Callable

import numpy as np

from errors import DomainError


def finite_difference_gradient(f: Callable[[np.ndarray], float], theta, h: float = 1e-5) -> np.ndarray:
    """Central differences (f(θ + h·e_i) - f(θ - h·e_i)) / 2h per coordinate."""
    if h <= 0:
        raise DomainError(f"step h must be positive, got {h}")
    theta = np.array(theta, dtype=np.float64)
    flat = theta.reshape(-1)
    grad = np.zeros_like(flat)
    for i in range(flat.size):
        saved = flat[i]
        flat[i] = saved + h
        up = f(theta)
        flat[i] = saved - h
        down = f(theta)
        flat[i] = saved
        grad[i] = (up - down) / (2.0 * h)
    return grad.reshape(theta.shape)


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-12)
    return float(np.max(np.abs(a - b)) / scale)
