from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from errors import DimensionError, NumericalError


class Tensor:
    """Dense float64 array with an optional gradient buffer and a backward closure.

    Results of completed operations are never mutated; gradients accumulate
    into ``grad`` of every node that requires them during ``backward``.
    """

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "op")

    def __init__(
        self,
        data,
        requires_grad: bool = False,
        _parents: tuple[Tensor, ...] = (),
        _op: str = "",
    ):
        arr = np.asarray(data, dtype=np.float64)
        if not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr)
        if not np.all(np.isfinite(arr)):
            raise NumericalError(f"non-finite value produced by {_op or 'constructor'}")
        self.data = arr
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self._parents = _parents
        self._backward: Callable[[np.ndarray], tuple] | None = None
        self.op = _op

    # --- Construction helpers ---

    @classmethod
    def _result(cls, data, parents: tuple[Tensor, ...], op: str, backward) -> Tensor:
        needs = any(p.requires_grad for p in parents)
        out = cls(data, requires_grad=needs, _parents=parents if needs else (), _op=op)
        if needs:
            out._backward = backward
        return out

    @staticmethod
    def zeros(shape) -> Tensor:
        return Tensor(np.zeros(shape))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        if self.size != 1:
            raise DimensionError(f"item() needs a single element, got shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def detach(self) -> Tensor:
        return Tensor(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, op={self.op or 'leaf'}, requires_grad={self.requires_grad})"

    # --- Autograd ---

    def _accumulate(self, g: np.ndarray):
        if self.grad is None:
            self.grad = np.array(g, dtype=np.float64)
        else:
            self.grad = self.grad + g

    def backward(self, grad: np.ndarray | None = None):
        """Propagate d(self)/d(node) to every node of the graph that requires it."""
        if grad is None:
            if self.size != 1:
                raise DimensionError(f"backward without a seed needs a scalar, got shape {self.shape}")
            grad = np.ones_like(self.data)

        order: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in visited:
                    stack.append((parent, False))

        upstream: dict[int, np.ndarray] = {id(self): np.asarray(grad, dtype=np.float64)}
        for node in reversed(order):
            g = upstream.pop(id(node), None)
            if g is None:
                continue
            if node._backward is None:
                if node.requires_grad:
                    node._accumulate(g)
                continue
            for parent, pg in zip(node._parents, node._backward(g)):
                if pg is None or not parent.requires_grad:
                    continue
                key = id(parent)
                upstream[key] = upstream[key] + pg if key in upstream else pg

    # --- Elementwise arithmetic (same shape or python scalar) ---

    def _check_same(self, other: Tensor, op: str):
        if self.shape != other.shape:
            raise DimensionError(f"{op}: shape {self.shape} does not match {other.shape}")

    def __add__(self, other) -> Tensor:
        if isinstance(other, Tensor):
            self._check_same(other, "add")
            return Tensor._result(self.data + other.data, (self, other), "add", lambda g: (g, g))
        return Tensor._result(self.data + float(other), (self,), "add", lambda g: (g,))

    __radd__ = __add__

    def __neg__(self) -> Tensor:
        return Tensor._result(-self.data, (self,), "neg", lambda g: (-g,))

    def __sub__(self, other) -> Tensor:
        if isinstance(other, Tensor):
            self._check_same(other, "sub")
            return Tensor._result(self.data - other.data, (self, other), "sub", lambda g: (g, -g))
        return Tensor._result(self.data - float(other), (self,), "sub", lambda g: (g,))

    def __rsub__(self, other) -> Tensor:
        return Tensor._result(float(other) - self.data, (self,), "rsub", lambda g: (-g,))

    def __mul__(self, other) -> Tensor:
        if isinstance(other, Tensor):
            self._check_same(other, "mul")
            a, b = self.data, other.data
            return Tensor._result(a * b, (self, other), "mul", lambda g: (g * b, g * a))
        c = float(other)
        return Tensor._result(self.data * c, (self,), "mul", lambda g: (g * c,))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Tensor:
        if isinstance(other, Tensor):
            raise DimensionError("division is only defined by a scalar")
        return self * (1.0 / float(other))

    def square(self) -> Tensor:
        a = self.data
        return Tensor._result(a * a, (self,), "square", lambda g: (2.0 * a * g,))

    def exp(self) -> Tensor:
        out = np.exp(self.data)
        return Tensor._result(out, (self,), "exp", lambda g: (g * out,))

    def log(self) -> Tensor:
        a = self.data
        if np.any(a <= 0):
            raise NumericalError("log of a non-positive value")
        return Tensor._result(np.log(a), (self,), "log", lambda g: (g / a,))

    # --- Reductions and shape ---

    def sum(self) -> Tensor:
        shape = self.shape
        return Tensor._result(self.data.sum(), (self,), "sum", lambda g: (np.full(shape, float(g)),))

    def mean(self) -> Tensor:
        return self.sum() / max(self.size, 1)

    def reshape(self, shape) -> Tensor:
        original = self.shape
        return Tensor._result(
            self.data.reshape(shape), (self,), "reshape", lambda g: (g.reshape(original),)
        )

    def __getitem__(self, key) -> Tensor:
        shape = self.shape

        def backward(g):
            full = np.zeros(shape)
            full[key] = g
            return (full,)

        return Tensor._result(self.data[key], (self,), "slice", backward)


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def parameter(data) -> Tensor:
    return Tensor(data, requires_grad=True)


def zero_grad(params: Iterable[Tensor]):
    for p in params:
        p.grad = None
