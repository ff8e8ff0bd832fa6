"""Naive reference implementations the tests cross-check against.

Everything here favors obviousness over speed: exact substring search
instead of fingerprints, Fraction arithmetic instead of integer-ratio
tricks, and quadratic scans instead of indexes.
"""

from __future__ import annotations

import math
from fractions import Fraction


def ref_shrink(ell: int, step: float) -> int:
    return min(math.ceil(ell * (1 - 1 / Fraction(step))), ell - 1)


def ref_schedule(n: int, step: float) -> list[int]:
    if n == 0:
        return []
    out = [n]
    while out[-1] > 1:
        out.append(ref_shrink(out[-1], step))
    return out


def ref_first_occurrence(data: bytes, start: int, ell: int) -> int | None:
    """Leftmost earlier start of data[start..start+ell-1], 1-based.

    Pure position-by-position comparison, no str.find.
    """
    target = data[start - 1 : start - 1 + ell]
    for p in range(0, start - 1):
        if data[p : p + ell] == target:
            return p + 1
    return None


def reference_parse(data: bytes, step: float) -> list[tuple]:
    """Content-exact mirror of the shrinking-window parser.

    Uses str.find for first occurrences, so its output is what the
    production parser must produce whenever no fingerprint collision
    occurs. Returns (start, length, source, literal) tuples.
    """
    n = len(data)
    sched = ref_schedule(n, step)
    out: dict[int, tuple] = {}

    def first_occ(start: int, ell: int) -> int | None:
        pos = data.find(data[start - 1 : start - 1 + ell]) + 1
        return pos if pos < start else None

    work = [(1, n, 0)] if n else []
    while work:
        i, j, t = work.pop()
        ell = sched[t]
        while i <= j:
            if ell == 1:
                for p in range(i, j + 1):
                    out[p] = (p, 1, 0, data[p - 1])
                break
            if j - i + 1 < ell:
                work.append((i, j, t + 1))
                break
            tail = j - ell + 1
            o = first_occ(tail, ell)
            if o is not None:
                out[tail] = (tail, ell, o, None)
                j = tail - 1
                continue
            q = (j - i + 1) // ell
            hit = None
            for k in range(q):
                bs = i + k * ell
                o = first_occ(bs, ell)
                if o is not None:
                    hit = (k, bs, o)
                    break
            if hit is None:
                work.append((i, j, t + 1))
                break
            k, bs, o = hit
            if k > 0:
                work.append((i, bs - 1, t + 1))
            out[bs] = (bs, ell, o, None)
            i = bs + ell
    return [out[k] for k in sorted(out)]


def ref_lz77_classic(data: bytes) -> list[bytes]:
    """Greedy left-to-right exact parse; returns the phrase texts.

    Each phrase is the longest prefix of the rest that starts earlier,
    plus one following literal byte (the final phrase may be a bare
    match when the input ends mid-copy).
    """
    n = len(data)
    phrases = []
    p = 0
    while p < n:
        m = 0
        while p + m < n and data.find(data[p : p + m + 1]) < p:
            m += 1
        if m == 0:
            length = 1
        elif p + m < n:
            length = m + 1
        else:
            length = m
        phrases.append(data[p : p + length])
        p += length
    return phrases
