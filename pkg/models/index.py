from dataclasses import dataclass

import numpy as np

from .architecture import Architecture, LayerSpec
from .methods import MethodConfig


@dataclass(frozen=True)
class EpistemicIndex:
    """A draw z ~ p(z); together with the parameters it fixes one forward pass."""

    method: str
    gaussians: tuple[np.ndarray, ...] = ()
    member: int | None = None
    mask_seed: int | None = None
    batch_size: int | None = None

    @property
    def is_empty(self) -> bool:
        return not self.gaussians and self.member is None and self.mask_seed is None


EMPTY_INDEX = EpistemicIndex("deterministic")


def weight_shapes(spec: LayerSpec, input_shape: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if spec.kind == "dense":
        return (spec.units, input_shape[0]), (spec.units,)
    return (spec.units, input_shape[0], spec.kernel, spec.kernel), (spec.units,)


def draw_index(
    method: MethodConfig,
    architecture: Architecture,
    rng: np.random.Generator,
    batch_size: int = 1,
) -> EpistemicIndex:
    kind = method.method
    if kind == "vnn":
        shapes = [architecture.shapes[i] for i in architecture.parametric_layers()]
        return EpistemicIndex(
            kind,
            tuple(rng.standard_normal((batch_size, *shape)) for shape in shapes),
            batch_size=batch_size,
        )
    if kind == "bbb":
        draws = []
        for i in architecture.parametric_layers():
            for shape in weight_shapes(architecture.layers[i], architecture.input_of(i)):
                draws.append(rng.standard_normal(shape))
        return EpistemicIndex(kind, tuple(draws))
    if kind == "hypermodel":
        return EpistemicIndex(kind, (rng.standard_normal(method.index_dim),))
    if kind == "ensemble":
        return EpistemicIndex(kind, member=int(rng.integers(method.ensemble_size)))
    if kind == "mcd":
        return EpistemicIndex(kind, mask_seed=int(rng.integers(2**63)))
    return EMPTY_INDEX
