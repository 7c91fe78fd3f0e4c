import gzip
import struct

import numpy as np
import pytest

from data import dump_idx, load_idx, load_idx_file
from errors import ParseError


def test_labels_round_trip():
    labels = np.array([0, 3, 9, 9, 1])
    parsed = load_idx(dump_idx(labels))
    assert parsed.dtype == np.int64
    assert np.array_equal(parsed, labels)


def test_images_are_scaled_to_unit_interval():
    raw = struct.pack(">IIII", 0x00000803, 2, 2, 2) + bytes([0, 255, 51, 102, 0, 0, 255, 255])
    images = load_idx(raw)
    assert images.shape == (2, 2, 2)
    assert images[0, 0, 1] == 1.0
    assert images[0, 1, 0] == pytest.approx(0.2)


def test_header_layout():
    raw = dump_idx(np.zeros((3, 4, 5)))
    assert raw[:4] == bytes([0, 0, 8, 3])
    assert struct.unpack(">III", raw[4:16]) == (3, 4, 5)
    assert len(raw) == 16 + 60


@pytest.mark.parametrize("raw,field", [
    (b"\x00\x00", "magic"),
    (struct.pack(">II", 0x00000D01, 1) + b"\x00\x00\x00\x00", "magic"),
    (struct.pack(">II", 0x00000800, 1) + b"\x00", "magic"),
    (struct.pack(">I", 0x00000803) + b"\x00\x00\x00\x01", "dimensions"),
    (struct.pack(">II", 0x00000801, 4) + b"\x01\x02", "payload"),
    (struct.pack(">II", 0x00000801, 1) + b"\x01\x02", "payload"),
])
def test_malformed_files(raw, field):
    with pytest.raises(ParseError) as info:
        load_idx(raw)
    assert info.value.field == field


def test_gzip_files(tmp_path):
    labels = np.array([4, 2])
    path = tmp_path / "labels-idx1-ubyte.gz"
    with gzip.open(path, "wb") as f:
        f.write(dump_idx(labels))
    assert np.array_equal(load_idx_file(path), labels)
