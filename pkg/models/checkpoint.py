import json
import struct
from pathlib import Path

import numpy as np

from errors import ParseError
from .architecture import Architecture
from .methods import MethodConfig
from .network import Model, build_model

MAGIC = b"VARNETCK"
FORMAT_VERSION = 1

# Container (little endian):
#   8s   magic
#   u16  format version
#   u32  descriptor length, then UTF-8 JSON {architecture, method}
#   u32  parameter count, then per parameter:
#        u16 name length, name, u8 ndim, ndim x u32 shape, float64 data


def save_checkpoint(model: Model, path: Path):
    descriptor = json.dumps(
        {"architecture": model.architecture.to_dict(), "method": model.method.to_dict()},
        sort_keys=True,
    ).encode("utf-8")
    named = model.named_parameters()
    parts = [MAGIC, struct.pack("<HI", FORMAT_VERSION, len(descriptor)), descriptor, struct.pack("<I", len(named))]
    for name, tensor in named:
        encoded = name.encode("utf-8")
        shape = tensor.shape
        parts.append(struct.pack(f"<H{len(encoded)}sB{len(shape)}I", len(encoded), encoded, len(shape), *shape))
        parts.append(tensor.data.astype("<f8").tobytes())
    Path(path).write_bytes(b"".join(parts))


class _Reader:
    def __init__(self, raw: bytes):
        self.raw = raw
        self.pos = 0

    def take(self, fmt: str, field: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.raw):
            raise ParseError(field, "checkpoint truncated")
        values = struct.unpack_from(fmt, self.raw, self.pos)
        self.pos += size
        return values

    def bytes(self, n: int, field: str) -> bytes:
        if self.pos + n > len(self.raw):
            raise ParseError(field, "checkpoint truncated")
        chunk = self.raw[self.pos:self.pos + n]
        self.pos += n
        return chunk


def load_checkpoint(path: Path) -> Model:
    reader = _Reader(Path(path).read_bytes())
    if reader.bytes(len(MAGIC), "magic") != MAGIC:
        raise ParseError("magic", "not a model checkpoint")
    version, desc_len = reader.take("<HI", "version")
    if version != FORMAT_VERSION:
        raise ParseError("version", f"unsupported checkpoint version {version}")
    descriptor = json.loads(reader.bytes(desc_len, "descriptor").decode("utf-8"))
    architecture = Architecture.from_dict(descriptor["architecture"])
    method = MethodConfig.from_dict(descriptor["method"])

    model = build_model(architecture, method, np.random.default_rng(0))
    targets = dict(model.named_parameters())
    (count,) = reader.take("<I", "parameter count")
    if count != len(targets):
        raise ParseError("parameter count", f"checkpoint has {count} arrays, model expects {len(targets)}")
    for _ in range(count):
        (name_len,) = reader.take("<H", "name")
        name = reader.bytes(name_len, "name").decode("utf-8")
        (ndim,) = reader.take("<B", name)
        shape = reader.take(f"<{ndim}I", name)
        if name not in targets or targets[name].shape != tuple(shape):
            raise ParseError(name, f"unexpected parameter {name} with shape {tuple(shape)}")
        size = int(np.prod(shape))
        values = np.frombuffer(reader.bytes(8 * size, name), dtype="<f8").reshape(shape)
        targets[name].data = values.astype(np.float64)
    return model
