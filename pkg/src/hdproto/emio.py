"""Binary embedding-file format: reader, writer, and header inspection.

Layout, all little-endian:

    magic   4 bytes  b"CFSE"
    version u32      1
    d_f     u32      feature dimension
    count   u64      number of records
    records count x (label u32, values d_f x f32)

Values are stored as 32-bit floats; computation elsewhere uses 64-bit.
Reading returns the stored float32 verbatim so a write-read-write cycle is
byte-identical.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import BadMagic, DimensionMismatch, TruncatedFile, VersionUnsupported

MAGIC = b"CFSE"
VERSION = 1
_HEADER = struct.Struct("<4sIIQ")


def _record_dtype(d_f: int) -> np.dtype:
    return np.dtype([("label", "<u4"), ("values", "<f4", (d_f,))])


def write_embeddings(path, features, labels) -> None:
    """Write labeled feature vectors; features are rows of an (n, d_f) matrix."""
    x = np.asarray(features)
    y = np.asarray(labels)
    if x.ndim != 2:
        raise DimensionMismatch(f"features must be 2-D, got shape {x.shape}")
    if y.ndim != 1 or y.shape[0] != x.shape[0]:
        raise DimensionMismatch("labels do not match feature rows")
    if y.size and (np.any(y < 0) or np.any(y > 0xFFFFFFFF)):
        raise ValueError("labels must fit an unsigned 32-bit integer")
    n, d_f = x.shape
    records = np.empty(n, dtype=_record_dtype(d_f))
    records["label"] = y.astype(np.uint32)
    records["values"] = x.astype(np.float32)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, d_f, n))
        records.tofile(fh)


def read_header(path) -> dict:
    """Parse and validate the fixed-size header; returns its fields plus file size."""
    path = Path(path)
    size = path.stat().st_size
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        if raw[: len(MAGIC)] != MAGIC[: len(raw)] or len(raw) < len(MAGIC):
            raise BadMagic(f"{path} is too short to hold the magic bytes")
        raise TruncatedFile(f"{path} ends inside the header")
    magic, version, d_f, count = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise BadMagic(f"{path} does not start with {MAGIC!r}")
    if version != VERSION:
        raise VersionUnsupported(f"{path} has version {version}, this build reads {VERSION}")
    expected = _HEADER.size + count * (4 + 4 * d_f)
    if size != expected:
        raise TruncatedFile(f"{path} holds {size} bytes, header declares {expected}")
    return {"version": version, "d_f": int(d_f), "sample_count": int(count), "file_size": size}


def read_embeddings(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a file back as (features float32 (n, d_f), labels uint32 (n,))."""
    header = read_header(path)
    d_f, count = header["d_f"], header["sample_count"]
    with open(path, "rb") as fh:
        fh.seek(_HEADER.size)
        records = np.fromfile(fh, dtype=_record_dtype(d_f), count=count)
    if records.shape[0] != count:
        raise TruncatedFile(f"{path}: expected {count} records, read {records.shape[0]}")
    return records["values"].reshape(count, d_f), records["label"].copy()
