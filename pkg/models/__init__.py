from .architecture import Architecture, LayerSpec, preset
from .methods import MethodConfig
from .index import EMPTY_INDEX, EpistemicIndex, draw_index
from .network import (
    BBBModel,
    DeterministicModel,
    DropoutModel,
    EnsembleModel,
    HyperModel,
    HypermodelParams,
    Model,
    VariationalModel,
    build_model,
    forward_indexed,
    hypermodel_materialize,
)
from .predictive import PredictiveSummary, predictive_class_probabilities, predictive_entropy, predictive_moments
from .training import TrainingConfig, TrainingTrace, fit, train, train_ensemble
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "Architecture",
    "LayerSpec",
    "preset",
    "MethodConfig",
    "EMPTY_INDEX",
    "EpistemicIndex",
    "draw_index",
    "BBBModel",
    "DeterministicModel",
    "DropoutModel",
    "EnsembleModel",
    "HyperModel",
    "HypermodelParams",
    "Model",
    "VariationalModel",
    "build_model",
    "forward_indexed",
    "hypermodel_materialize",
    "PredictiveSummary",
    "predictive_class_probabilities",
    "predictive_entropy",
    "predictive_moments",
    "TrainingConfig",
    "TrainingTrace",
    "fit",
    "train",
    "train_ensemble",
    "load_checkpoint",
    "save_checkpoint",
]
