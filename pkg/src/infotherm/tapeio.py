"""Raw bit-tape file format.

Layout: an 8-byte big-endian unsigned bit count, followed by the bits packed
8 per byte, most significant bit first.  Padding bits in the last byte are 0.
"""
from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .errors import InvalidInput

_HEADER = struct.Struct(">Q")


def encode_bits(bits) -> bytes:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise InvalidInput("tape contains values other than 0 and 1")
    return _HEADER.pack(arr.size) + np.packbits(arr, bitorder="big").tobytes()


def decode_bits(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise InvalidInput("bit file shorter than its header")
    (n,) = _HEADER.unpack_from(data)
    body = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    if body.size != (n + 7) // 8:
        raise InvalidInput(f"bit file declares {n} bits but carries {body.size} bytes")
    return np.unpackbits(body, bitorder="big")[:n].copy()


def atomic_write(path, data: bytes | str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_bits(path, bits) -> None:
    atomic_write(path, encode_bits(bits))


def read_bits(path) -> np.ndarray:
    return decode_bits(Path(path).read_bytes())
