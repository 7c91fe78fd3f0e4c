from dataclasses import dataclass, field

import numpy as np

from errors import ConfigError, UsageError
from .core import Tensor

OPTIMIZERS = ("sgd", "adam")


@dataclass
class OptimizerState:
    kind: str
    learning_rate: float
    weight_decay: float = 0.0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step_count: int = 0
    first_moment: list[np.ndarray] = field(default_factory=list)
    second_moment: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in OPTIMIZERS:
            raise ConfigError("training.optimizer", f"unknown optimizer '{self.kind}'")
        if self.learning_rate < 0:
            raise ConfigError("training.learning_rate", "must be >= 0")
        if self.weight_decay < 0:
            raise ConfigError("training.weight_decay", "must be >= 0")


def optimizer_step(
    params: list[Tensor], state: OptimizerState, decay_mask: list[bool] | None = None
) -> OptimizerState:
    """Apply one update in place to every parameter's data from its populated grad.

    decay_mask[i] False exempts params[i] from weight decay.
    """
    for i, p in enumerate(params):
        if p.grad is None:
            raise UsageError(f"parameter {i} with shape {p.shape} has no gradient")
    if decay_mask is None:
        decay_mask = [True] * len(params)
    if len(decay_mask) != len(params):
        raise UsageError(f"decay mask has {len(decay_mask)} entries for {len(params)} parameters")
    decays = [state.weight_decay if keep else 0.0 for keep in decay_mask]

    state.step_count += 1
    if state.kind == "sgd":
        for p, wd in zip(params, decays):
            g = p.grad + wd * p.data
            p.data = p.data - state.learning_rate * g
        return state

    if not state.first_moment:
        state.first_moment = [np.zeros_like(p.data) for p in params]
        state.second_moment = [np.zeros_like(p.data) for p in params]
    if len(state.first_moment) != len(params):
        raise UsageError("optimizer state was built for a different parameter list")

    bc1 = 1.0 - state.beta1 ** state.step_count
    bc2 = 1.0 - state.beta2 ** state.step_count
    for p, m, v, wd in zip(params, state.first_moment, state.second_moment, decays):
        g = p.grad + wd * p.data
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        p.data = p.data - state.learning_rate * (m / bc1) / (np.sqrt(v / bc2) + state.epsilon)
    return state
