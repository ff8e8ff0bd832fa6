"""Exact greedy Lempel-Ziv reference parser and brute-force helpers.

Quadratic-ish and size-limited by design: this module exists to pin down
ground truth (the exact phrase count z and true first occurrences) for
testing and for the stats command, not to be fast.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

VARIANTS = ("classic", "prefix")
DEFAULT_LIMIT = 10**6


@dataclass(frozen=True, slots=True)
class OraclePhrase:
    """One greedy phrase.

    ``match_len`` bytes starting at ``start`` repeat an occurrence that
    begins at ``source`` (strictly earlier, possibly overlapping the
    phrase). A phrase one byte longer than its match carries an appended
    literal; ``match_len == 0`` marks a bare literal. Positions 1-based.
    """

    start: int
    length: int
    source: int | None
    match_len: int


@dataclass(frozen=True)
class ExactParse:
    n: int
    variant: str
    phrases: tuple[OraclePhrase, ...]

    @property
    def z(self) -> int:
        return len(self.phrases)


@dataclass(frozen=True)
class OracleStats:
    z: int
    variant: str
    elapsed_ms: float


def _longest_earlier_match(data: bytes, p0: int) -> int:
    """Longest L such that data[p0:p0+L] occurs starting before p0.

    Occurrences may overlap the phrase; only their start must be earlier.
    Monotone in L (a prefix of an occurrence is an occurrence), so binary
    search over L with the C-level bytes.find doing the heavy lifting.
    """
    lo, hi = 0, len(data) - p0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if data.find(data[p0 : p0 + mid]) < p0:
            lo = mid
        else:
            hi = mid - 1
    return lo


def exact_lz77(
    data: bytes, variant: str = "classic", limit: int = DEFAULT_LIMIT
) -> tuple[ExactParse, OracleStats]:
    """Greedy left-to-right parse of ``data``.

    classic: each phrase is the longest earlier-occurring match plus one
    appended literal (the final phrase may be a pure match when the input
    ends mid-match); a fresh byte yields a bare literal.
    prefix: pure copies only, no appended literal.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if len(data) > limit:
        raise ValueError(f"input of {len(data)} bytes exceeds the oracle limit {limit}")
    t0 = time.perf_counter()
    n = len(data)
    phrases: list[OraclePhrase] = []
    p0 = 0
    while p0 < n:
        m = _longest_earlier_match(data, p0)
        if m == 0:
            phrases.append(OraclePhrase(p0 + 1, 1, None, 0))
            p0 += 1
            continue
        src = data.find(data[p0 : p0 + m]) + 1
        if variant == "classic" and p0 + m < n:
            phrases.append(OraclePhrase(p0 + 1, m + 1, src, m))
            p0 += m + 1
        else:
            phrases.append(OraclePhrase(p0 + 1, m, src, m))
            p0 += m
    parse = ExactParse(n, variant, tuple(phrases))
    stats = OracleStats(len(phrases), variant, (time.perf_counter() - t0) * 1000.0)
    return parse, stats


def phrase_texts(data: bytes, parse: ExactParse) -> list[bytes]:
    return [data[p.start - 1 : p.start - 1 + p.length] for p in parse.phrases]


def first_occurrence_bruteforce(data: bytes, start: int, ell: int) -> int | None:
    """Leftmost o < start with data[o..o+ell-1] == data[start..start+ell-1].

    Positions 1-based; None when the block at ``start`` is the first
    occurrence of its content.
    """
    if ell < 1 or start < 1 or start + ell - 1 > len(data):
        raise ValueError("block out of range")
    pos = data.find(data[start - 1 : start - 1 + ell]) + 1
    return pos if pos < start else None
