"""Byte sources with explicit pass accounting.

The parse driver reads its input only as whole forward passes (begin_pass
plus chunk, byte, or window iteration) or as forward-moving ranged scans
used for candidate collection. Both are billed to an IoStats ledger;
random access is simply not part of the driver-facing interface. Block
counts model a fixed transfer unit of ``block_size`` bytes, so a full
pass over n bytes always costs ceil(n / block_size) block reads.

Positions are 1-based and ranges are inclusive, matching how the parser
addresses the input everywhere else.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Union

Source = Union[bytes, bytearray, memoryview, str, os.PathLike]


@dataclass(frozen=True)
class IoConfig:
    block_size: int = 4096
    buffer_size: int = 1 << 18

    def __post_init__(self) -> None:
        if self.block_size < 1:
            raise ValueError("block_size must be positive")
        if self.buffer_size < 1:
            raise ValueError("buffer_size must be positive")


@dataclass
class IoStats:
    passes: int = 0
    bytes_read: int = 0
    blocks_read: int = 0
    candidate_scan_bytes: int = 0

    def copy(self) -> "IoStats":
        return IoStats(
            self.passes, self.bytes_read, self.blocks_read, self.candidate_scan_bytes
        )


class SequentialReader:
    """Single-owner sequential view of a file or an in-memory buffer.

    ``range_bytes`` exists for verification and decoding support; it is
    deliberately not billed to the pass ledger and the parse driver never
    calls it (tests assert aux_range_reads stays zero across a raw parse).
    """

    def __init__(self, source: Source, config: IoConfig | None = None) -> None:
        self.config = config or IoConfig()
        self.stats = IoStats()
        self.aux_range_reads = 0
        self.aux_bytes_read = 0
        self._pass_open = False
        self._pass_bytes = 0
        self._scan_floor = 0
        if isinstance(source, (bytes, bytearray, memoryview)):
            self._data: bytes | None = bytes(source)
            self._file = None
            self._n = len(self._data)
            self.name = "<memory>"
        else:
            self._data = None
            path = os.fspath(source)
            self._file = open(path, "rb")
            self._n = os.fstat(self._file.fileno()).st_size
            self.name = str(path)

    # -- lifecycle -----------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None

    def __enter__(self) -> "SequentialReader":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- raw access helper ----------------------------------------------

    def _read_abs(self, offset: int, nbytes: int) -> bytes:
        if self._data is not None:
            return self._data[offset : offset + nbytes]
        self._file.seek(offset)
        return self._file.read(nbytes)

    # -- pass interface --------------------------------------------------

    def begin_pass(self) -> None:
        """Rewind to the start and open a new billed traversal."""
        self.stats.passes += 1
        self._pass_open = True
        self._pass_bytes = 0

    def _bill_pass(self, nbytes: int) -> None:
        b = self.config.block_size
        before = -(-self._pass_bytes // b)
        self._pass_bytes += nbytes
        after = -(-self._pass_bytes // b)
        self.stats.bytes_read += nbytes
        self.stats.blocks_read += after - before

    def chunks(self) -> Iterator[bytes]:
        """Stream the whole input forward in buffer-sized chunks."""
        if not self._pass_open:
            raise RuntimeError("chunks() requires begin_pass() first")
        size = self.config.buffer_size
        while self._pass_bytes < self._n:
            take = min(size, self._n - self._pass_bytes)
            chunk = self._read_abs(self._pass_bytes, take)
            self._bill_pass(len(chunk))
            yield chunk
        self._pass_open = False

    def next_byte(self) -> int | None:
        """One byte of the current pass, or None at end of input."""
        if not self._pass_open:
            raise RuntimeError("next_byte() requires begin_pass() first")
        if self._pass_bytes >= self._n:
            self._pass_open = False
            return None
        c = self._read_abs(self._pass_bytes, 1)
        self._bill_pass(1)
        return c[0]

    def windows(self, ell: int) -> Iterator[tuple[int, bytes]]:
        """Sliding windows of length ``ell`` as (1-based start, bytes)."""
        if ell < 1:
            raise ValueError("window length must be positive")
        buf = bytearray()
        trim = 0
        start = 1
        for chunk in self.chunks():
            buf += chunk
            while len(buf) - trim >= ell:
                yield start, bytes(buf[trim : trim + ell])
                start += 1
                trim += 1
            if trim > (1 << 16):
                del buf[:trim]
                trim = 0

    # -- ranged candidate scans -------------------------------------------

    def scan_reset(self) -> None:
        self._scan_floor = 0

    def scan_range(self, start: int, end: int) -> bytes:
        """Bytes of S[start..end] (1-based, inclusive), billed as scan I/O.

        Scan starts must move forward between scan_reset() calls; asking
        for an earlier start would amount to random access.
        """
        if not 1 <= start <= end <= self._n:
            raise ValueError(f"scan range [{start}, {end}] out of bounds (n={self._n})")
        if start < self._scan_floor:
            raise ValueError("candidate scans must move forward")
        self._scan_floor = start
        self.stats.candidate_scan_bytes += end - start + 1
        return self._read_abs(start - 1, end - start + 1)

    # -- verification support (unbilled) ----------------------------------

    def range_bytes(self, start: int, end: int) -> bytes:
        if not 1 <= start <= end <= self._n:
            raise ValueError(f"range [{start}, {end}] out of bounds (n={self._n})")
        self.aux_range_reads += 1
        self.aux_bytes_read += end - start + 1
        return self._read_abs(start - 1, end - start + 1)


def open_reader(source: Source, config: IoConfig | None = None) -> SequentialReader:
    return SequentialReader(source, config)


def snapshot_stats(reader: SequentialReader) -> IoStats:
    """Point-in-time copy of the reader's ledger."""
    return reader.stats.copy()
