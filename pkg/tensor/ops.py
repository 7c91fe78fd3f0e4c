import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit, log_softmax as _log_softmax

import config
from errors import DimensionError, UsageError
from .core import Tensor

ACTIVATIONS = ("identity", "relu", "leaky_relu", "softplus", "tanh")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product of two 2-D tensors."""
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: cannot multiply {a.shape} by {b.shape}")
    A, B = a.data, b.data
    return Tensor._result(A @ B, (a, b), "matmul", lambda g: (g @ B.T, A.T @ g))


def affine(x: Tensor, W: Tensor, b: Tensor) -> Tensor:
    """out[n, o] = sum_i W[o, i] * x[n, i] + b[o]."""
    if x.data.ndim != 2 or W.data.ndim != 2 or b.data.ndim != 1:
        raise DimensionError(f"affine: expected x[B,I], W[O,I], b[O], got {x.shape}, {W.shape}, {b.shape}")
    if x.shape[1] != W.shape[1] or W.shape[0] != b.shape[0]:
        raise DimensionError(f"affine: x {x.shape} incompatible with W {W.shape} and b {b.shape}")
    X, Wd = x.data, W.data

    def backward(g):
        return g @ Wd, g.T @ X, g.sum(axis=0)

    return Tensor._result(X @ Wd.T + b.data, (x, W, b), "affine", backward)


def conv_output_size(size: int, kernel: int, stride: int, padding: int) -> int:
    span = size + 2 * padding - kernel
    if stride < 1 or span < 0 or span % stride:
        raise DimensionError(
            f"conv2d: ({size} + 2*{padding} - {kernel}) / {stride} + 1 is not a positive integer"
        )
    return span // stride + 1


def conv2d(x: Tensor, K: Tensor, b: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    """Cross-correlation of x[B,C,H,W] with K[F,C,kh,kw] plus per-filter bias."""
    if x.data.ndim != 4 or K.data.ndim != 4 or b.data.ndim != 1:
        raise DimensionError(f"conv2d: expected 4-D input and kernel, got {x.shape} and {K.shape}")
    n, c, h, w = x.shape
    f, kc, kh, kw = K.shape
    if kc != c or b.shape[0] != f:
        raise DimensionError(f"conv2d: input {x.shape} incompatible with kernel {K.shape}, bias {b.shape}")
    ho = conv_output_size(h, kh, stride, padding)
    wo = conv_output_size(w, kw, stride, padding)

    pad = ((0, 0), (0, 0), (padding, padding), (padding, padding))
    xp = np.pad(x.data, pad) if padding else x.data
    # windows[b, c, i, j, u, v] = xp[b, c, i*stride + u, j*stride + v]
    windows = sliding_window_view(xp, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
    Kd = K.data
    out = np.tensordot(windows, Kd, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
    out = out + b.data[None, :, None, None]

    def backward(g):
        dK = np.tensordot(g, windows, axes=([0, 2, 3], [0, 2, 3]))
        db = g.sum(axis=(0, 2, 3))
        dx = None
        if x.requires_grad:
            dwin = np.tensordot(g, Kd, axes=([1], [0]))  # [B, H', W', C, kh, kw]
            dxp = np.zeros(xp.shape)
            for u in range(kh):
                for v in range(kw):
                    dxp[:, :, u:u + stride * (ho - 1) + 1:stride, v:v + stride * (wo - 1) + 1:stride] += (
                        dwin[..., u, v].transpose(0, 3, 1, 2)
                    )
            dx = dxp[:, :, padding:padding + h, padding:padding + w] if padding else dxp
        return dx, dK, db

    return Tensor._result(out, (x, K, b), "conv2d", backward)


def activation(x: Tensor, kind: str) -> Tensor:
    a = x.data
    if kind == "identity":
        return x
    if kind == "relu":
        mask = a > 0
        return Tensor._result(np.where(mask, a, 0.0), (x,), "relu", lambda g: (g * mask,))
    if kind == "leaky_relu":
        slope = np.where(a > 0, 1.0, config.LEAKY_SLOPE)
        return Tensor._result(a * slope, (x,), "leaky_relu", lambda g: (g * slope,))
    if kind == "softplus":
        return Tensor._result(np.logaddexp(0.0, a), (x,), "softplus", lambda g: (g * expit(a),))
    if kind == "tanh":
        out = np.tanh(a)
        return Tensor._result(out, (x,), "tanh", lambda g: (g * (1.0 - out * out),))
    raise UsageError(f"unknown activation '{kind}', expected one of {ACTIVATIONS}")


def softplus(x: Tensor) -> Tensor:
    return activation(x, "softplus")


def log_softmax(logits: Tensor) -> Tensor:
    """Row-wise log-softmax of a [B, C] tensor."""
    if logits.data.ndim != 2:
        raise DimensionError(f"log_softmax expects [B, C], got {logits.shape}")
    out = _log_softmax(logits.data, axis=1)
    probs = np.exp(out)
    return Tensor._result(
        out, (logits,), "log_softmax", lambda g: (g - probs * g.sum(axis=1, keepdims=True),)
    )
