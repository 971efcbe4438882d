"""Binary code/readout files.

Layout (little endian)::

    4 bytes  magic   b"SCLB" (code) or b"SCLR" (readout)
    u32      rows    d for a code, F for a readout
    u32      cols    F for a code, d for a readout
    rows*cols float64 entries, column-major
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .codes import Code, CodeKind
from .exceptions import FormatError
from .readouts import Readout, ReadoutKind

__all__ = ["CODE_MAGIC", "READOUT_MAGIC", "write_code", "read_code", "write_readout",
           "read_readout", "dumps_matrix", "loads_matrix"]

CODE_MAGIC = b"SCLB"
READOUT_MAGIC = b"SCLR"
_HEADER = struct.Struct("<4sII")


def dumps_matrix(matrix, magic):
    m = np.asarray(matrix, dtype="<f8")
    rows, cols = m.shape
    return _HEADER.pack(magic, rows, cols) + m.tobytes(order="F")


def loads_matrix(data, magic):
    """Parse a file body; raises FormatError naming the failing byte offset."""
    if len(data) < _HEADER.size:
        raise FormatError(f"header needs {_HEADER.size} bytes, file has {len(data)}", len(data))
    got, rows, cols = _HEADER.unpack_from(data)
    if got != magic:
        raise FormatError(f"bad magic {got!r}, expected {magic!r}", 0)
    if rows < 1 or cols < 1:
        raise FormatError(f"empty matrix {rows}x{cols}", 4)
    expected = _HEADER.size + 8 * rows * cols
    if len(data) < expected:
        raise FormatError(
            f"truncated payload: {rows}x{cols} needs {expected} bytes, file has {len(data)}",
            len(data),
        )
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes after payload", expected)
    flat = np.frombuffer(data, dtype="<f8", count=rows * cols, offset=_HEADER.size)
    m = flat.reshape((rows, cols), order="F").astype(np.float64)
    bad = np.flatnonzero(~np.isfinite(flat))
    if bad.size:
        raise FormatError("non-finite entry", _HEADER.size + 8 * int(bad[0]))
    return m


def write_code(path, code):
    Path(path).write_bytes(dumps_matrix(code.columns, CODE_MAGIC))


def read_code(path, normalize=False):
    """Load an external code; ``normalize`` rescales columns instead of rejecting them."""
    m = loads_matrix(Path(path).read_bytes(), CODE_MAGIC)
    return Code.from_matrix(m, normalize=normalize, kind=CodeKind.EXTERNAL)


def write_readout(path, readout):
    G = readout.G if isinstance(readout, Readout) else readout
    Path(path).write_bytes(dumps_matrix(G, READOUT_MAGIC))


def read_readout(path):
    """Load a readout (F x d). It is not assumed to have unit diagonal."""
    return Readout(loads_matrix(Path(path).read_bytes(), READOUT_MAGIC), ReadoutKind.EXTERNAL)
