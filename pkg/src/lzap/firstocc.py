"""First-occurrence machinery for one schedule level.

collect_candidates registers the prefix- and suffix-aligned blocks of
every pending interval, sliding_pass records each candidate's leftmost
occurrence in a single traversal, and ShortTable answers short lengths
from an exact precomputed map so those levels need no pass at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _kernels
from .fingerprint import FingerprintConfig
from .iomodel import SequentialReader


@dataclass(slots=True)
class Candidate:
    fingerprint: int
    starts: list[int] = field(default_factory=list)
    first_occurrence: int | None = None


class FirstOccIndex:
    """fingerprint -> Candidate map for a single block length."""

    def __init__(self, level_length: int) -> None:
        if level_length < 1:
            raise ValueError("level length must be positive")
        self.level_length = level_length
        self.by_fp: dict[int, Candidate] = {}
        self.by_start: dict[int, int] = {}

    def register(self, block_start: int, fp: int) -> None:
        prev = self.by_start.get(block_start)
        if prev is not None:
            # collisions aside, re-registering the same block is idempotent
            assert prev == fp, "one block start registered with two fingerprints"
            return
        self.by_start[block_start] = fp
        cand = self.by_fp.get(fp)
        if cand is None:
            cand = Candidate(fp)
            self.by_fp[fp] = cand
        cand.starts.append(block_start)

    def query(self, block_start: int) -> int | None:
        """Recorded source for the block at ``block_start``, if earlier.

        Only blocks registered before the pass may be asked about; the
        in-level recursion touches a subset of them by construction.
        """
        fp = self.by_start.get(block_start)
        assert fp is not None, f"query for unregistered block at {block_start}"
        cand = self.by_fp[fp]
        assert cand.first_occurrence is not None, "query before the sliding pass"
        o = cand.first_occurrence
        return o if o < block_start else None

    @property
    def candidates(self) -> int:
        return len(self.by_fp)

    @property
    def blocks(self) -> int:
        return len(self.by_start)


def aligned_starts(start: int, end: int, ell: int) -> list[int]:
    """Sorted unique starts of the prefix- and suffix-aligned blocks."""
    q = (end - start + 1) // ell
    out = {start + k * ell for k in range(q)}
    out.update(end - (k + 1) * ell + 1 for k in range(q))
    return sorted(out)


def collect_candidates(
    intervals: Sequence, ell: int, cfg: FingerprintConfig, reader: SequentialReader
) -> FirstOccIndex:
    """Fingerprint the aligned blocks of each interval into a fresh index.

    One bounded ranged scan per interval, forward over the interval
    extents in start order; billed as candidate-scan bytes.
    """
    index = FirstOccIndex(ell)
    reader.scan_reset()
    for iv in sorted(intervals, key=lambda v: v.start):
        starts = aligned_starts(iv.start, iv.end, ell)
        if not starts:
            continue
        extent = reader.scan_range(iv.start, iv.end)
        offsets = [s - iv.start for s in starts]
        fps = _kernels.fps_at(extent, ell, offsets, cfg.base, cfg.modulus)
        for s, fp in zip(starts, fps):
            index.register(s, fp)
    return index


def sliding_pass(
    index: FirstOccIndex, reader: SequentialReader, cfg: FingerprintConfig
) -> FirstOccIndex:
    """One full traversal recording each candidate's leftmost occurrence."""
    reader.begin_pass()
    buf = b"".join(reader.chunks())
    first = _kernels.first_occurrences(
        buf, index.level_length, cfg.base, cfg.modulus, index.by_fp.keys()
    )
    for fp, cand in index.by_fp.items():
        occ = first.get(fp)
        # every candidate is a substring of S, so its own start matches
        assert occ is not None, "candidate content not found in its own input"
        cand.first_occurrence = occ
    return index


# -- short-length table ----------------------------------------------------


@dataclass
class ShortTable:
    """Exact first-occurrence map for the short scheduled lengths.

    entries[ell][block_bytes] is the 1-based leftmost start of that
    content in S. Lookups are collision-free, so levels covered here
    need neither candidates nor a sliding pass.
    """

    mem_budget: int
    slack: int
    sigma: int = 0
    threshold: int = 0
    entries: dict[int, dict[bytes, int]] = field(default_factory=dict)
    dropped: list[int] = field(default_factory=list)

    def covers(self, ell: int) -> bool:
        return ell in self.entries

    def lookup(self, ell: int, block: bytes) -> int:
        table = self.entries[ell]
        assert block in table, "short-table lookup for content absent from S"
        return table[block]


def _fits(sigma: int, ell: int, slack: int, budget: int) -> bool:
    # covered means ell < log_sigma(budget) - slack, kept in integers
    if sigma <= 1:
        return budget > 1
    e = ell + slack
    if e * (sigma.bit_length() - 1) > budget.bit_length() + 1:
        return False
    return sigma**e < budget


def build_short_table(
    reader: SequentialReader,
    schedule_lengths: Iterable[int],
    mem_budget: int,
    slack: int = 1,
    sigma: int = 0,
) -> ShortTable:
    """One traversal that measures sigma and fills the covered lengths.

    A zero or tiny budget yields a valid empty table. Lengths whose
    entries blow the soft cap mem_budget / sigma**slack are dropped,
    largest first, and recorded in ``dropped``.
    """
    table = ShortTable(mem_budget=mem_budget, slack=slack, sigma=sigma)
    if mem_budget <= 0 or reader.n == 0:
        return table
    reader.begin_pass()
    buf = b"".join(reader.chunks())
    if table.sigma <= 0:
        table.sigma = len(set(buf))
    covered = sorted(
        ell
        for ell in set(schedule_lengths)
        if ell >= 2 and ell <= len(buf) and _fits(table.sigma, ell, slack, mem_budget)
    )
    cost = 0
    for ell in covered:
        seen: dict[bytes, int] = {}
        for p in range(len(buf) - ell + 1):
            key = buf[p : p + ell]
            if key not in seen:
                seen[key] = p + 1
        table.entries[ell] = seen
        cost += len(seen) * (ell + 8)
    cap = mem_budget // (table.sigma**slack) if table.sigma >= 2 else mem_budget
    while table.entries and cost > cap:
        worst = max(table.entries)
        cost -= len(table.entries[worst]) * (worst + 8)
        del table.entries[worst]
        table.dropped.append(worst)
    table.threshold = max(table.entries, default=0)
    return table
