import zlib
from dataclasses import dataclass

import numpy as np

from .core import Tensor


def _label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream addressed by (master_seed, labeled path).

    Every call to ``generator()`` starts the same Philox sequence, so a stream
    never depends on how many draws were taken from its siblings.
    """

    master_seed: int
    path: tuple[tuple[str, int], ...] = ()

    def spawn(self, label: str, index: int) -> "RngStream":
        return RngStream(self.master_seed, self.path + ((label, int(index)),))

    def spawn_key(self) -> tuple[int, ...]:
        key: list[int] = []
        for label, index in self.path:
            key.extend((_label_key(label), int(index)))
        return tuple(key)

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed & (2**64 - 1), spawn_key=self.spawn_key())
        return np.random.Generator(np.random.Philox(seq))

    def __str__(self):
        labels = "/".join(f"{label}={index}" for label, index in self.path)
        return f"{self.master_seed}:{labels or '-'}"


def sample_standard_normal(shape, rng: RngStream) -> Tensor:
    """I.i.d. N(0, 1) entries, bit-identical for an identical stream."""
    return Tensor(rng.generator().standard_normal(shape))
