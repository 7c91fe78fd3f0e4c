from .core import Tensor, as_tensor, parameter, zero_grad
from .ops import ACTIVATIONS, activation, affine, conv2d, conv_output_size, log_softmax, matmul, softplus
from .rng import RngStream, sample_standard_normal
from .optim import OptimizerState, optimizer_step
from .gradcheck import finite_difference_gradient, relative_error

__all__ = [
    "Tensor",
    "as_tensor",
    "parameter",
    "zero_grad",
    "ACTIVATIONS",
    "activation",
    "affine",
    "conv2d",
    "conv_output_size",
    "log_softmax",
    "matmul",
    "softplus",
    "RngStream",
    "sample_standard_normal",
    "OptimizerState",
    "optimizer_step",
    "finite_difference_gradient",
    "relative_error",
]
