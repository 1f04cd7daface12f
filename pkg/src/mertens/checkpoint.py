"""On-disk formats for long scans: JSON-lines events and binary checkpoints.

Checkpoint layout (little-endian)::

    b"MRTS1"
    u64 limit, u64 block_len, u64 stride, u64 config_hash
    i64 last completed block index (-1 before the first block)
    u64 n_last, i64 M_last, i64 max, i64 min
    u64 zeros, u64 extrema, u64 samples, u64 events file length
    u32 crc32 of everything above
"""

from __future__ import annotations

import hashlib
import heapq
import json
import os
import struct
import tempfile
import zlib
from dataclasses import dataclass

from mertens.errors import CheckpointError, IntegrityError

MAGIC = b"MRTS1"
_BODY = struct.Struct("<5sQQQQqQqqqQQQQ")
_CRC = struct.Struct("<I")
SIZE = _BODY.size + _CRC.size

_SAFE_INT = 1 << 53
KIND_ORDER = {"extremum": 0, "zero": 1, "sample": 2}


def jnum(v: int):
    """Integers beyond 53 bits go out as decimal strings."""
    v = int(v)
    return v if -_SAFE_INT <= v <= _SAFE_INT else str(v)


def config_hash(*fields) -> int:
    h = hashlib.blake2b(repr(fields).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class Checkpoint:
    limit: int
    block_len: int
    stride: int
    config_hash: int
    last_block: int
    n_last: int
    M_last: int
    max: int
    min: int
    n_zeros: int
    n_extrema: int
    n_samples: int
    events_offset: int

    def pack(self) -> bytes:
        body = _BODY.pack(MAGIC, self.limit, self.block_len, self.stride, self.config_hash,
                          self.last_block, self.n_last, self.M_last, self.max, self.min,
                          self.n_zeros, self.n_extrema, self.n_samples, self.events_offset)
        return body + _CRC.pack(zlib.crc32(body))

    @classmethod
    def unpack(cls, data: bytes) -> "Checkpoint":
        if len(data) != SIZE:
            raise CheckpointError(f"checkpoint has {len(data)} bytes, expected {SIZE}")
        body, (crc,) = data[:_BODY.size], _CRC.unpack(data[_BODY.size:])
        if body[:5] != MAGIC:
            raise CheckpointError(f"bad checkpoint magic {body[:5]!r}")
        if zlib.crc32(body) != crc:
            raise CheckpointError("checkpoint checksum mismatch")
        return cls(*_BODY.unpack(body)[1:])


def atomic_write(path, data: bytes | str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_checkpoint(path, ck: Checkpoint) -> None:
    atomic_write(path, ck.pack())


def read_checkpoint(path) -> Checkpoint:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    return Checkpoint.unpack(data)


def merge_events(zeros, extrema, samples):
    """Events ordered by n, then extremum < zero < sample."""
    it_z = (("zero", n, 0) for n in zeros)
    it_e = (("extremum", n, M) for n, M in extrema)
    it_s = (("sample", n, M) for n, M in samples)
    return heapq.merge(it_e, it_z, it_s, key=lambda e: (e[1], KIND_ORDER[e[0]]))


def format_events(zeros, extrema, samples) -> str:
    return "".join(
        json.dumps({"kind": k, "n": jnum(n), "M": jnum(M)}, separators=(",", ":")) + "\n"
        for k, n, M in merge_events(zeros, extrema, samples)
    )


def parse_event(line: str, lineno: int = 0) -> tuple[str, int, int]:
    try:
        obj = json.loads(line)
        kind = obj["kind"]
        if kind not in KIND_ORDER:
            raise ValueError(f"unknown kind {kind!r}")
        return kind, int(obj["n"]), int(obj["M"])
    except (ValueError, KeyError, TypeError) as e:
        raise IntegrityError(f"line {lineno}: malformed event: {e}") from e


def read_events(path, max_bytes: int | None = None):
    """Yield ``(kind, n, M)`` from a JSON-lines events file."""
    with open(path, "rb") as fh:
        data = fh.read() if max_bytes is None else fh.read(max_bytes)
    if max_bytes is not None and len(data) != max_bytes:
        raise IntegrityError(f"events file shorter than checkpointed length {max_bytes}")
    for i, line in enumerate(data.decode().splitlines(), 1):
        if line.strip():
            yield parse_event(line, i)
