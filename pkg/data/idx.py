import gzip
import struct
from pathlib import Path

import numpy as np

from errors import ParseError

UBYTE_TYPE = 0x08
IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
MAX_ITEMS = 2**40


def load_idx(raw: bytes) -> np.ndarray:
    """Parse an unsigned-byte IDX container.

    Layout (big endian):
      0000  u32   magic 0x000008NN, NN = number of dimensions
      0004  u32   size of dimension 0
      ...   u32   size of dimensions 1..NN-1
      ....  u8[]  payload, row-major

    1-D files are labels and come back as int64; anything else is image data
    mapped to [0, 1] by dividing by 255.
    """
    if len(raw) < 4:
        raise ParseError("magic", f"need 4 bytes, got {len(raw)}")
    (magic,) = struct.unpack(">I", raw[:4])
    type_code = (magic >> 8) & 0xFF
    ndim = magic & 0xFF
    if magic >> 16 != 0 or type_code != UBYTE_TYPE or not 1 <= ndim <= 4:
        raise ParseError("magic", f"unsupported IDX magic 0x{magic:08X}")

    header = 4 + 4 * ndim
    if len(raw) < header:
        raise ParseError("dimensions", f"header declares {ndim} sizes but is only {len(raw)} bytes")
    shape = struct.unpack(f">{ndim}I", raw[4:header])
    count = 1
    for size in shape:
        count *= size
        if count > MAX_ITEMS:
            raise ParseError("dimensions", f"size overflow for shape {shape}")

    payload = raw[header:]
    if len(payload) < count:
        raise ParseError("payload", f"truncated: shape {shape} needs {count} bytes, found {len(payload)}")
    if len(payload) > count:
        raise ParseError("payload", f"{len(payload) - count} trailing bytes after shape {shape}")

    values = np.frombuffer(payload, dtype=np.uint8).reshape(shape)
    if ndim == 1:
        return values.astype(np.int64)
    return values.astype(np.float64) / 255.0


def dump_idx(array: np.ndarray) -> bytes:
    """Inverse of load_idx for label vectors and [0, 1] image arrays."""
    array = np.asarray(array)
    if array.ndim == 1 and np.issubdtype(array.dtype, np.integer):
        payload = array.astype(np.uint8)
    else:
        payload = np.rint(array * 255.0).astype(np.uint8)
    magic = (UBYTE_TYPE << 8) | array.ndim
    header = struct.pack(f">I{array.ndim}I", magic, *array.shape)
    return header + payload.tobytes()


def load_idx_file(path: Path) -> np.ndarray:
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as f:
        return load_idx(f.read())
