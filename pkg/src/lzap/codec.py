"""Wire format, decoder, and verification for parses.

A serialized parse is: magic ``LZAP``, one version byte, the input
length n as a varint, the phrase count as a varint, then per phrase a
varint source (0 marks a literal, followed by the raw byte; anything
else is a copy, followed by a varint length). Varints are LEB128:
low seven bits per byte, high bit set on all but the last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .iomodel import SequentialReader
from .parse_core import Parse, Phrase

MAGIC = b"LZAP"
VERSION = 1

_VERIFY_CHUNK = 64 * 1024


class DecodeError(ValueError):
    """Raised when a serialized parse cannot be decoded.

    phrase_index is the zero-based index of the offending phrase, or
    None when the failure precedes the phrase list.
    """

    def __init__(self, message: str, phrase_index: int | None = None):
        super().__init__(message)
        self.phrase_index = phrase_index


def write_uvarint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varints are unsigned")
    while True:
        b = value & 0x7F
        value >>= 7
        if value:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def read_uvarint(blob: bytes, pos: int) -> tuple[int, int]:
    """Decode one varint at ``pos``; returns (value, next position)."""
    value = 0
    shift = 0
    while True:
        if pos >= len(blob):
            raise DecodeError("truncated varint")
        b = blob[pos]
        pos += 1
        value |= (b & 0x7F) << shift
        if not b & 0x80:
            return value, pos
        shift += 7
        if shift > 63:
            raise DecodeError("varint too long")


def encode(parse: Parse) -> bytes:
    out = bytearray(MAGIC)
    out.append(VERSION)
    write_uvarint(out, parse.n)
    write_uvarint(out, len(parse.phrases))
    for ph in parse.phrases:
        write_uvarint(out, ph.source)
        if ph.is_literal:
            out.append(ph.literal)
        else:
            write_uvarint(out, ph.length)
    return bytes(out)


def decode_phrases(blob: bytes) -> Parse:
    """Deserialize a parse without materializing the output bytes."""
    if blob[:4] != MAGIC:
        raise DecodeError("bad magic; not a serialized parse")
    if len(blob) < 5:
        raise DecodeError("truncated header")
    if blob[4] != VERSION:
        raise DecodeError(f"unsupported version {blob[4]}")
    pos = 5
    n, pos = read_uvarint(blob, pos)
    count, pos = read_uvarint(blob, pos)
    phrases = []
    start = 1
    for idx in range(count):
        try:
            source, pos = read_uvarint(blob, pos)
            if source == 0:
                if pos >= len(blob):
                    raise DecodeError("truncated literal byte")
                literal = blob[pos]
                pos += 1
                ph = Phrase(start, 1, 0, literal)
            else:
                length, pos = read_uvarint(blob, pos)
                ph = Phrase(start, length, source)
        except (DecodeError, ValueError) as exc:
            raise DecodeError(f"phrase {idx}: {exc}", phrase_index=idx) from None
        phrases.append(ph)
        start += ph.length
    if pos != len(blob):
        raise DecodeError(f"{len(blob) - pos} trailing bytes after the last phrase")
    try:
        return Parse(n, tuple(phrases))
    except ValueError as exc:
        raise DecodeError(str(exc)) from None


def decode(blob: bytes) -> bytes:
    """Decode a serialized parse back to the original bytes."""
    parse = decode_phrases(blob)
    out = bytearray()
    for idx, ph in enumerate(parse.phrases):
        if ph.is_literal:
            out.append(ph.literal)
        elif ph.source + ph.length - 1 < ph.start:
            src = ph.source - 1
            out += out[src : src + ph.length]
        else:
            # self-overlapping copy: bytes become available as we write
            src = ph.source - 1
            for t in range(ph.length):
                out.append(out[src + t])
    return bytes(out)


@dataclass(frozen=True, slots=True)
class Mismatch:
    """First disagreement between a decoded parse and the input."""

    phrase_index: int
    position: int
    message: str

    def __str__(self) -> str:
        return f"phrase {self.phrase_index} at position {self.position}: {self.message}"


def _phrase_at(parse: Parse, position: int) -> int:
    lo, hi = 0, len(parse.phrases) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if parse.phrases[mid].start <= position:
            lo = mid
        else:
            hi = mid - 1
    return lo


def verify(parse: Parse, reader: SequentialReader) -> Mismatch | None:
    """Compare the decoded parse against the reader; None means equal.

    Comparison is chunked so only a bounded slice of each side is held
    at once; reads here are bookkept separately from parse-time passes.
    """
    if parse.n != reader.n:
        return Mismatch(0, 1, f"parse covers {parse.n} bytes, input has {reader.n}")
    if parse.n == 0:
        return None
    decoded = decode(encode(parse))
    pos = 1
    while pos <= parse.n:
        end = min(pos + _VERIFY_CHUNK - 1, parse.n)
        got = decoded[pos - 1 : end]
        want = reader.range_bytes(pos, end)
        if got != want:
            off = next(t for t in range(len(want)) if got[t] != want[t])
            at = pos + off
            idx = _phrase_at(parse, at)
            return Mismatch(
                idx,
                at,
                f"decoded byte {got[off]:#04x} differs from input byte {want[off]:#04x}",
            )
        pos = end + 1
    return None


class VerificationError(RuntimeError):
    """Every parse attempt produced output that differs from the input."""

    def __init__(self, mismatch: Mismatch, attempts: int):
        super().__init__(
            f"verification failed after {attempts} attempt(s): {mismatch}"
        )
        self.mismatch = mismatch
        self.attempts = attempts


def verify_and_retry(
    parse_producer: Callable[[int], Parse],
    reader: SequentialReader,
    max_retries: int = 3,
) -> Parse:
    """Call parse_producer(attempt) until its output verifies.

    max_retries bounds the total number of attempts. The producer gets
    the attempt number so it can reseed its fingerprint base.
    """
    if max_retries < 1:
        raise ValueError("max_retries must be at least 1")
    last: Mismatch | None = None
    for attempt in range(max_retries):
        parse = parse_producer(attempt)
        mismatch = verify(parse, reader)
        if mismatch is None:
            return parse
        last = mismatch
    raise VerificationError(last, max_retries)
