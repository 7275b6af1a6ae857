"""Embedding-file writer (the engine-side wire format, written independently).

Layout, all little-endian:

    magic   4 bytes  b"CFSE"
    version u32      1
    d_f     u32      feature dimension
    count   u64      number of records
    records count x (label u32, values d_f x f32)
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"CFSE"
VERSION = 1
_HEADER = struct.Struct("<4sIIQ")


def write_embedding_file(path, features: np.ndarray, labels: np.ndarray) -> None:
    x = np.ascontiguousarray(features, dtype="<f4")
    y = np.asarray(labels)
    if x.ndim != 2 or y.ndim != 1 or y.shape[0] != x.shape[0]:
        raise ValueError("features must be (n, d_f) with one label per row")
    n, d_f = x.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, d_f, n))
        for row, label in zip(x, y):
            fh.write(struct.pack("<I", int(label)))
            fh.write(row.tobytes())


def read_embedding_file(path) -> tuple[np.ndarray, np.ndarray]:
    """Minimal reader used by featex's own tests; the engine has the real one."""
    with open(path, "rb") as fh:
        magic, version, d_f, count = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != MAGIC or version != VERSION:
            raise ValueError(f"{path}: not a readable embedding file")
        dtype = np.dtype([("label", "<u4"), ("values", "<f4", (d_f,))])
        records = np.fromfile(fh, dtype=dtype, count=count)
    return records["values"].reshape(count, d_f), records["label"].copy()
