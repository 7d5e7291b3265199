"""Self-describing binary tensor container used for datasets, embeddings and
checkpoints.

Layout (all integers little-endian):

    magic   4 bytes   b"PTAC"
    version u16       currently 1
    then zero or more tensor records until end of file:
        name_len u16
        name     name_len bytes, UTF-8
        rank     u64
        dims     rank x u64
        dtype    u8, 1 = float32
        payload  prod(dims) float32 values, row-major

Writes are deterministic: tensors are emitted in the order given (save a dict
with sorted keys if byte-stable output matters to you; the helpers here sort).
"""

from __future__ import annotations

import io
import struct
from pathlib import Path

import numpy as np

MAGIC = b"PTAC"
VERSION = 1
_DTYPE_F32 = 1


class ContainerError(ValueError):
    """Malformed or unsupported container file."""


def write_tensors(path: str | Path, tensors: dict[str, np.ndarray]) -> None:
    """Write named float32 tensors to ``path``. Keys are sorted for stable bytes."""
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<H", VERSION))
    for name in sorted(tensors):
        arr = np.ascontiguousarray(tensors[name], dtype=np.float32)
        raw = name.encode("utf-8")
        if len(raw) > 0xFFFF:
            raise ContainerError(f"tensor name too long: {name!r}")
        buf.write(struct.pack("<H", len(raw)))
        buf.write(raw)
        buf.write(struct.pack("<Q", arr.ndim))
        for dim in arr.shape:
            buf.write(struct.pack("<Q", dim))
        buf.write(struct.pack("<B", _DTYPE_F32))
        buf.write(arr.tobytes(order="C"))
    Path(path).write_bytes(buf.getvalue())


def read_tensors(path: str | Path) -> dict[str, np.ndarray]:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise ContainerError(f"{path}: bad magic {data[:4]!r}")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != VERSION:
        raise ContainerError(f"{path}: unsupported version {version}")
    pos = 6
    out: dict[str, np.ndarray] = {}
    while pos < len(data):
        (name_len,) = struct.unpack_from("<H", data, pos)
        pos += 2
        name = data[pos : pos + name_len].decode("utf-8")
        pos += name_len
        (rank,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        dims = struct.unpack_from(f"<{rank}Q", data, pos)
        pos += 8 * rank
        (dtype_tag,) = struct.unpack_from("<B", data, pos)
        pos += 1
        if dtype_tag != _DTYPE_F32:
            raise ContainerError(f"{path}: unknown dtype tag {dtype_tag}")
        count = int(np.prod(dims, dtype=np.int64)) if rank else 1
        nbytes = 4 * count
        if pos + nbytes > len(data):
            raise ContainerError(f"{path}: truncated payload for {name!r}")
        arr = np.frombuffer(data, dtype="<f4", count=count, offset=pos).reshape(dims)
        out[name] = arr.copy()
        pos += nbytes
    return out
