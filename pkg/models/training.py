import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

import config
from data import batch_iterator
from errors import ConfigError, NumericalError, TrainingError, UsageError
from tensor import OptimizerState, RngStream, Tensor, log_softmax, optimizer_step, zero_grad
from .architecture import Architecture
from .methods import MethodConfig
from .network import DeterministicModel, EnsembleModel, Model, build_model, init_deterministic

logger = logging.getLogger(__name__)

LOSSES = ("mse", "gaussian_nll", "cross_entropy")


@dataclass(frozen=True)
class TrainingConfig:
    loss: str = "mse"
    optimizer: str = config.OPTIMIZER
    learning_rate: float = config.LEARNING_RATE
    weight_decay: float = config.WEIGHT_DECAY
    epochs: int = config.EPOCHS
    batch_size: int = config.BATCH_SIZE

    def __post_init__(self):
        if self.loss not in LOSSES:
            raise ConfigError("training.loss", f"unknown loss '{self.loss}', expected one of {LOSSES}")
        if self.epochs < 0:
            raise ConfigError("training.epochs", "must be >= 0")
        if self.batch_size < 1:
            raise ConfigError("training.batch_size", "must be >= 1")

    def make_optimizer(self) -> OptimizerState:
        return OptimizerState(self.optimizer, self.learning_rate, weight_decay=self.weight_decay)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainingTrace:
    epoch_losses: list[float] = field(default_factory=list)
    steps: int = 0

    @property
    def final_loss(self) -> float:
        return self.epoch_losses[-1] if self.epoch_losses else float("nan")


def data_loss(output: Tensor, targets: np.ndarray, loss_kind: str) -> Tensor:
    if loss_kind == "mse":
        y = Tensor(np.asarray(targets, dtype=np.float64).reshape(output.shape))
        return (output - y).square().mean()
    if loss_kind == "gaussian_nll":
        # head columns: mean, log variance
        if output.data.ndim != 2 or output.shape[1] != 2:
            raise UsageError(f"gaussian_nll needs a [B, 2] head, got {output.shape}")
        y = Tensor(np.asarray(targets, dtype=np.float64).reshape(-1))
        mean, log_var = output[:, 0], output[:, 1]
        return ((log_var + (y - mean).square() * (-log_var).exp()) * 0.5).mean()
    if loss_kind == "cross_entropy":
        if output.data.ndim != 2 or output.shape[1] < 2:
            raise UsageError(f"cross_entropy needs [B, C] logits, got {output.shape}")
        labels = np.asarray(targets, dtype=np.int64)
        onehot = np.zeros(output.shape)
        onehot[np.arange(len(labels)), labels] = 1.0
        return -(log_softmax(output) * Tensor(onehot)).sum() / len(labels)
    raise UsageError(f"unknown loss '{loss_kind}'")


def train(
    model: Model,
    dataset,
    loss_kind: str,
    optimizer: OptimizerState,
    epochs: int,
    batch_size: int,
    rng: np.random.Generator,
) -> TrainingTrace:
    """Minimize the task loss (+ the model's regularizer / num_batches) with one fresh index per batch."""
    if isinstance(model, EnsembleModel):
        raise UsageError("ensembles are trained member by member with train_ensemble")
    if len(dataset) < 1:
        raise UsageError("cannot train on an empty dataset")

    params = model.parameters()
    mask = model.decay_mask()
    num_batches = math.ceil(len(dataset) / batch_size)
    trace = TrainingTrace()
    for epoch in range(epochs):
        total = 0.0
        for batch in batch_iterator(dataset, batch_size, rng):
            zero_grad(params)
            try:
                z = model.draw_index(rng, batch_size=len(batch))
                loss = data_loss(model.forward(batch.inputs, z), batch.targets, loss_kind)
                penalty = model.regularizer()
                if penalty is not None:
                    loss = loss + penalty / num_batches
                loss.backward()
                optimizer_step(params, optimizer, mask)
            except NumericalError as e:
                raise TrainingError(f"training diverged in epoch {epoch}: {e}", trace) from e
            total += loss.item() * len(batch)
            trace.steps += 1
        trace.epoch_losses.append(total / len(dataset))
        logger.debug(f"epoch {epoch}: loss {trace.epoch_losses[-1]:.6f}")

    if trace.epoch_losses and not math.isfinite(trace.final_loss):
        raise TrainingError("final loss is not finite", trace)
    return trace


def train_ensemble(
    method: MethodConfig,
    architecture: Architecture,
    dataset,
    training: TrainingConfig,
    stream: RngStream,
) -> EnsembleModel:
    """K members with their own initialization and shuffling order, one stream each."""
    if method.ensemble_size < 1:
        raise ConfigError("methods.ensemble_size", "must be >= 1")
    members = []
    for k in range(method.ensemble_size):
        rng = stream.spawn("member", k).generator()
        member = DeterministicModel(architecture, init_deterministic(architecture, rng))
        trace = train(
            member, dataset, training.loss, training.make_optimizer(), training.epochs, training.batch_size, rng
        )
        logger.debug(f"ensemble member {k}: final loss {trace.final_loss:.6f}")
        members.append(member)
    return EnsembleModel(members, method)


def fit(
    method: MethodConfig,
    architecture: Architecture,
    dataset,
    training: TrainingConfig,
    stream: RngStream,
) -> tuple[Model, TrainingTrace | None]:
    """Build and train a model of any method; ensembles return no single trace."""
    if method.method == "ensemble":
        return train_ensemble(method, architecture, dataset, training, stream), None
    rng = stream.generator()
    model = build_model(architecture, method, rng)
    trace = train(
        model, dataset, training.loss, training.make_optimizer(), training.epochs, training.batch_size, rng
    )
    return model, trace
