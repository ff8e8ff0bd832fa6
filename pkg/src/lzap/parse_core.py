"""Shrinking-window approximate Lempel-Ziv parser.

parse() factors the reader's contents into literal phrases <0, byte> and
copy phrases <source, length> whose source starts strictly earlier. Work
proceeds level by level over a decreasing schedule of block lengths:
every pending interval at the current length is resolved against the
recorded first occurrences of its aligned blocks, using at most one
fingerprint pass over the input per level. Intervals that fail to
resolve are requeued at the next, smaller length. Fingerprint collisions
can corrupt a copy, so the result is verified against the input and the
whole parse is retried with a fresh base when verification fails.
"""

from __future__ import annotations

import bisect
import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import firstocc
from .fingerprint import MERSENNE61, FingerprintConfig
from .iomodel import IoStats, SequentialReader, snapshot_stats

# -- parameters and schedule ------------------------------------------------


@dataclass(frozen=True)
class Params:
    """Parse parameters.

    ``step`` (when set) pins the shrink factor that otherwise comes from
    n**effective_epsilon; it exists so exact integer factors can be
    requested without relying on float rounding.
    """

    n: int
    epsilon: float
    halve_epsilon: bool = False
    sigma: int = 0
    seed: int = 0
    step: float | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon must be in (0, 1]")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.step is not None and not self.step > 1.0:
            raise ValueError("step must exceed 1")

    @property
    def effective_epsilon(self) -> float:
        return self.epsilon / 2.0 if self.halve_epsilon else self.epsilon

    def step_value(self) -> float:
        if self.step is not None:
            return float(self.step)
        return float(self.n) ** self.effective_epsilon


def shrink(ell: int, params: Params) -> int:
    """Next smaller block length: min(ceil(ell * (1 - 1/step)), ell - 1).

    The ceiling is taken exactly over the rational value of the held
    float step, so integer products never drift across the boundary.
    """
    if ell < 2:
        raise ValueError("shrink needs ell >= 2")
    p, q = params.step_value().as_integer_ratio()
    # ceil(ell * (p - q) / p) in exact integer arithmetic
    reduced = -(-ell * (p - q) // p)
    return min(reduced, ell - 1)


@dataclass(frozen=True)
class LengthSchedule:
    """All block lengths a parse will visit, in decreasing order."""

    lengths: tuple[int, ...]
    step: float


@lru_cache(maxsize=4096)
def build_schedule(params: Params) -> LengthSchedule:
    if params.n == 0:
        return LengthSchedule((), 1.0)
    if params.n == 1:
        return LengthSchedule((1,), 1.0)
    out = [params.n]
    while out[-1] > 1:
        out.append(shrink(out[-1], params))
    return LengthSchedule(tuple(out), params.step_value())


# -- parse data types --------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Phrase:
    """<0, literal> or <source, length> with source strictly earlier."""

    start: int
    length: int
    source: int
    literal: int | None = None

    def __post_init__(self) -> None:
        if self.start < 1 or self.length < 1:
            raise ValueError("phrase start and length must be positive")
        if self.source == 0:
            if self.length != 1:
                raise ValueError("literal phrases have length 1")
            if self.literal is None or not 0 <= self.literal <= 255:
                raise ValueError("literal phrases carry one byte value")
        else:
            if self.literal is not None:
                raise ValueError("copy phrases carry no literal byte")
            if not 1 <= self.source < self.start:
                raise ValueError("copy source must start strictly earlier")

    @property
    def is_literal(self) -> bool:
        return self.source == 0


@dataclass(frozen=True)
class Parse:
    """Phrases tiling [1, n] in start order."""

    n: int
    phrases: tuple[Phrase, ...]

    def __post_init__(self) -> None:
        pos = 1
        for ph in self.phrases:
            if ph.start != pos:
                raise ValueError(
                    f"phrase at {ph.start} breaks the tiling (expected start {pos})"
                )
            if not ph.is_literal and ph.source + ph.length - 1 > self.n:
                raise ValueError(f"copy at {ph.start} reads past the end of the input")
            pos += ph.length
        if pos - 1 != self.n:
            raise ValueError(f"phrases cover {pos - 1} bytes of an input of {self.n}")


@dataclass(frozen=True, slots=True)
class Interval:
    """A still-unparsed stretch S[start..end], queued at pending_length."""

    start: int
    end: int
    pending_length: int

    def __post_init__(self) -> None:
        if not 1 <= self.start <= self.end:
            raise ValueError("interval bounds must satisfy 1 <= start <= end")
        if self.pending_length < 1:
            raise ValueError("pending length must be positive")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


# -- run statistics -----------------------------------------------------------


@dataclass(slots=True)
class LevelRow:
    length: int
    intervals: int
    blocks: int
    candidates: int
    pass_run: bool
    scan_bytes: int
    emitted: int


@dataclass
class RunStats:
    n: int
    epsilon: float
    seed: int
    modulus: int
    schedule_length: int
    attempts: int = 0
    sliding_passes: int = 0
    candidates_max: int = 0
    short_table_lengths: tuple[int, ...] = ()
    levels: list[LevelRow] = field(default_factory=list)
    io: IoStats | None = None
    elapsed_ms: float = 0.0

    @property
    def retries(self) -> int:
        return max(self.attempts - 1, 0)


# -- per-level resolution ------------------------------------------------------


class _Level:
    """Everything resolve_interval may consult at one schedule length."""

    __slots__ = ("length", "next_length", "occ", "table", "blocks", "segments",
                 "segment_starts", "log")

    def __init__(self, length, next_length, occ=None, table=None, blocks=None,
                 segments=None, log=None):
        self.length = length
        self.next_length = next_length
        self.occ = occ
        self.table = table
        self.blocks = blocks
        self.segments = segments or {}
        self.segment_starts = sorted(self.segments)
        self.log = log

    def query(self, block_start: int) -> int | None:
        if self.occ is not None:
            o = self.occ.query(block_start)
        else:
            assert self.table is not None, "query at a level without occurrences"
            content = self.blocks[block_start]
            first = self.table.lookup(self.length, content)
            o = first if first < block_start else None
        if self.log is not None:
            self.log.append((block_start, self.length, o))
        return o

    def byte_at(self, pos: int) -> int:
        i = bisect.bisect_right(self.segment_starts, pos) - 1
        seg_start = self.segment_starts[i]
        return self.segments[seg_start][pos - seg_start]


def resolve_interval(iv: Interval, level: _Level, out: dict[int, Phrase],
                     work: list[Interval]) -> None:
    """Resolve one interval at the level's length.

    Emits phrases into ``out`` (keyed by start), requeues unresolved
    pieces into ``work`` at the next length, and handles same-length
    sub-intervals iteratively right here, consulting only occurrences
    already recorded for this level.
    """
    ell = level.length
    i, j = iv.start, iv.end
    while i <= j:
        if ell == 1:
            for p in range(i, j + 1):
                out[p] = Phrase(p, 1, 0, level.byte_at(p))
            return
        if j - i + 1 < ell:
            work.append(Interval(i, j, level.next_length))
            return
        # trailing block: copy it when its content was seen earlier, then
        # keep resolving what precedes it at this same length
        tail = j - ell + 1
        o = level.query(tail)
        if o is not None:
            out[tail] = Phrase(tail, ell, o)
            j = tail - 1
            continue
        # leading blocks: the first one with an earlier occurrence splits
        # the interval into requeued-left / copy / same-length-right
        q = (j - i + 1) // ell
        split = None
        for k in range(q):
            bs = i + k * ell
            o = level.query(bs)
            if o is not None:
                split = (k, bs, o)
                break
        if split is None:
            work.append(Interval(i, j, level.next_length))
            return
        k, bs, o = split
        if k > 0:
            work.append(Interval(i, bs - 1, level.next_length))
        out[bs] = Phrase(bs, ell, o)
        i = bs + ell


def _prepare_level(reader, ell, next_length, intervals, cfg, short_table, row, log):
    if ell == 1:
        segments = {}
        reader.scan_reset()
        for iv in intervals:
            segments[iv.start] = reader.scan_range(iv.start, iv.end)
        return _Level(ell, next_length, segments=segments, log=log)
    needy = [iv for iv in intervals if iv.length >= ell]
    if not needy:
        return _Level(ell, next_length, log=log)
    if short_table is not None and short_table.covers(ell):
        blocks = {}
        reader.scan_reset()
        for iv in needy:
            extent = reader.scan_range(iv.start, iv.end)
            for s in firstocc.aligned_starts(iv.start, iv.end, ell):
                rel = s - iv.start
                blocks[s] = extent[rel : rel + ell]
        row.blocks = len(blocks)
        return _Level(ell, next_length, table=short_table, blocks=blocks, log=log)
    index = firstocc.collect_candidates(needy, ell, cfg, reader)
    firstocc.sliding_pass(index, reader, cfg)
    row.blocks = index.blocks
    row.candidates = index.candidates
    row.pass_run = True
    return _Level(ell, next_length, occ=index, log=log)


def _run_once(reader, params, schedule, cfg, short_table, stats, log):
    out: dict[int, Phrase] = {}
    current: list[Interval] = []
    if params.n > 0:
        current.append(Interval(1, params.n, schedule.lengths[0]))
    lengths = schedule.lengths
    for t, ell in enumerate(lengths):
        next_length = lengths[t + 1] if t + 1 < len(lengths) else 0
        row = LevelRow(ell, len(current), 0, 0, False, 0, 0)
        work: list[Interval] = []
        if current:
            current.sort(key=lambda v: v.start)
            scan_before = reader.stats.candidate_scan_bytes
            emitted_before = len(out)
            level = _prepare_level(
                reader, ell, next_length, current, cfg, short_table, row, log
            )
            for iv in current:
                assert iv.pending_length == ell
                resolve_interval(iv, level, out, work)
            row.scan_bytes = reader.stats.candidate_scan_bytes - scan_before
            row.emitted = len(out) - emitted_before
            if row.pass_run:
                stats.sliding_passes += 1
            stats.candidates_max = max(stats.candidates_max, row.candidates)
        stats.levels.append(row)
        current = work
    assert not current, "intervals left over after the last schedule length"
    return out


# -- public entry points -------------------------------------------------------


def parse(
    reader: SequentialReader,
    params: Params,
    *,
    modulus: int = MERSENNE61,
    max_retries: int = 3,
    short_table_mem: int = 0,
    short_table_slack: int = 1,
    query_log: list | None = None,
) -> tuple[Parse, RunStats]:
    """Parse the reader's contents; returns a verified Parse plus RunStats.

    Raises codec.VerificationError only after max_retries attempts (each
    with a differently seeded base) all failed verification.
    """
    from . import codec  # codec depends on this module's types

    if reader.n != params.n:
        raise ValueError(f"params.n={params.n} but the reader holds {reader.n} bytes")
    t0 = time.perf_counter()
    schedule = build_schedule(params)
    stats = RunStats(
        n=params.n,
        epsilon=params.effective_epsilon,
        seed=params.seed,
        modulus=modulus,
        schedule_length=len(schedule.lengths),
    )
    short_table = None
    if short_table_mem > 0 and params.n > 0:
        short_table = firstocc.build_short_table(
            reader,
            schedule.lengths,
            short_table_mem,
            slack=short_table_slack,
            sigma=params.sigma,
        )
        stats.short_table_lengths = tuple(sorted(short_table.entries))

    def produce(attempt: int) -> Parse:
        cfg = FingerprintConfig(modulus=modulus, seed=params.seed, attempt=attempt)
        stats.attempts = attempt + 1
        stats.levels = []
        stats.sliding_passes = 0
        stats.candidates_max = 0
        if query_log is not None:
            query_log.clear()  # keep only the attempt that verifies
        phrases = _run_once(reader, params, schedule, cfg, short_table, stats, query_log)
        return Parse(params.n, tuple(phrases[k] for k in sorted(phrases)))

    result = codec.verify_and_retry(produce, reader, max_retries)
    stats.io = snapshot_stats(reader)
    stats.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return result, stats


def parse_bytes(data: bytes, epsilon: float, **kwargs) -> tuple[Parse, RunStats]:
    """Convenience wrapper: parse an in-memory byte string."""
    params_kw = {}
    for name in ("halve_epsilon", "sigma", "seed", "step"):
        if name in kwargs:
            params_kw[name] = kwargs.pop(name)
    params = Params(n=len(data), epsilon=epsilon, **params_kw)
    reader = SequentialReader(data)
    return parse(reader, params, **kwargs)
