"""Instance stream files.

Text: header ``n=<int> count=<int>`` then one instance per line, ``n``
space-separated floats in shortest round-trip form.

Binary: ``SISORT1\\0``, little-endian uint32 ``n``, uint64 ``count``, then
``count*n`` little-endian float64 values.
"""
from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np

from .errors import StreamFormatError

MAGIC = b"SISORT1\x00"


def write_text(path, instances) -> None:
    rows = np.asarray(instances, dtype=float)
    if rows.ndim != 2:
        raise ValueError("instances must be a 2-d array")
    count, n = rows.shape
    with open(path, "w") as fh:
        fh.write(f"n={n} count={count}\n")
        for row in rows.tolist():
            fh.write(" ".join(repr(v) for v in row))
            fh.write("\n")


def write_binary(path, instances) -> None:
    rows = np.asarray(instances, dtype="<f8")
    count, n = rows.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", n, count))
        fh.write(np.ascontiguousarray(rows).tobytes())


def _parse_header(line: str) -> tuple[int, int]:
    try:
        fields = dict(tok.split("=", 1) for tok in line.split())
        return int(fields["n"]), int(fields["count"])
    except (ValueError, KeyError) as exc:
        raise StreamFormatError(f"bad header line: {line.strip()!r}") from exc


def read_stream(path) -> np.ndarray:
    """Read a text or binary stream into a ``(count, n)`` float array."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
        if head == MAGIC:
            n, count = struct.unpack("<IQ", fh.read(12))
            data = np.frombuffer(fh.read(), dtype="<f8")
            if data.size != n * count:
                raise StreamFormatError(f"expected {n * count} values, found {data.size}")
            return data.reshape(count, n).astype(float)
    with open(path) as fh:
        n, count = _parse_header(fh.readline())
        rows = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            vals = [float(tok) for tok in line.split()]
            if len(vals) != n:
                raise StreamFormatError(f"line {lineno}: expected {n} values, found {len(vals)}")
            if not all(math.isfinite(v) for v in vals):
                raise StreamFormatError(f"line {lineno}: non-finite value")
            rows.append(vals)
    if len(rows) != count:
        raise StreamFormatError(f"header says count={count}, found {len(rows)} instances")
    return np.array(rows, dtype=float).reshape(count, n)


def write_stream(path, instances, binary: bool = False) -> None:
    (write_binary if binary else write_text)(path, instances)


def write_permutations(path, perms) -> None:
    """One 1-based permutation per line."""
    with open(path, "w") as fh:
        for perm in perms:
            fh.write(" ".join(str(i + 1) for i in perm))
            fh.write("\n")


def read_permutations(path) -> list[list[int]]:
    with open(path) as fh:
        return [[int(t) - 1 for t in line.split()] for line in fh if line.strip()]
