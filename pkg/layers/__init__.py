from .params import (
    BBBConvParams,
    BBBDenseParams,
    ConvParams,
    DenseParams,
    DropoutConfig,
    VariationalConvParams,
    VariationalDenseParams,
)
from .functional import (
    bbb_conv_forward,
    bbb_dense_forward,
    bbb_kl_to_prior,
    conv_forward,
    dense_forward,
    dropout_forward,
    dropout_mask,
    variational_conv_forward,
    variational_dense_forward,
)

__all__ = [
    "BBBConvParams",
    "BBBDenseParams",
    "ConvParams",
    "DenseParams",
    "DropoutConfig",
    "VariationalConvParams",
    "VariationalDenseParams",
    "bbb_conv_forward",
    "bbb_dense_forward",
    "bbb_kl_to_prior",
    "conv_forward",
    "dense_forward",
    "dropout_forward",
    "dropout_mask",
    "variational_conv_forward",
    "variational_dense_forward",
]
