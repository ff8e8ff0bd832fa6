"""Hot loops behind the fingerprint scans.

Each loop exists twice: a numba-compiled version used on large buffers and
a plain-Python mirror that always works and doubles as an independent
cross-check in tests. Compiled code covers the default modulus 2**61 - 1
(products reduced through 32-bit limb splits, sized so nothing overflows
64 bits) and any modulus below 2**31 (products fit in 64 bits directly).
Other moduli fall back to the Python mirrors.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

M61 = (1 << 61) - 1
_SMALL_MOD_LIMIT = 1 << 31

# Below this buffer size the Python loops beat the kernel-call overhead.
KERNEL_MIN_BYTES = 512

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*a, **k):
        def wrap(fn):
            return fn

        return wrap


# -- plain-Python mirrors ------------------------------------------------


def py_first_occurrences(
    buf, ell: int, base: int, modulus: int, cand_fps: Iterable[int]
) -> dict[int, int]:
    """Leftmost window start (1-based) for each candidate fingerprint."""
    want = set(cand_fps)
    first: dict[int, int] = {}
    n = len(buf)
    if ell <= 0 or n < ell or not want:
        return first
    fp = 0
    for t in range(ell):
        fp = (fp * base + buf[t]) % modulus
    drop = pow(base, ell - 1, modulus)
    p = 0
    while True:
        if fp in want and fp not in first:
            first[fp] = p + 1
            if len(first) == len(want):
                break
        if p + ell >= n:
            break
        fp = ((fp - buf[p] * drop) * base + buf[p + ell]) % modulus
        p += 1
    return first


def py_fps_at(
    buf, ell: int, offsets: Sequence[int], base: int, modulus: int
) -> list[int]:
    """Fingerprints of the length-``ell`` blocks at sorted 0-based offsets."""
    if not offsets:
        return []
    out = []
    drop = pow(base, ell - 1, modulus)
    lo = offsets[0]
    fp = 0
    for t in range(lo, lo + ell):
        fp = (fp * base + buf[t]) % modulus
    pos = lo
    for off in offsets:
        while pos < off:
            fp = ((fp - buf[pos] * drop) * base + buf[pos + ell]) % modulus
            pos += 1
        out.append(fp)
    return out


# -- compiled kernels ----------------------------------------------------

_U = np.uint64
_MASK32 = _U(0xFFFFFFFF)
_M61 = _U(M61)


@njit(cache=True)
def _mulmod61(a, b):
    # 64x64 product reduced mod 2**61 - 1 via 32-bit limbs; every partial
    # term stays below 2**63 because a, b < 2**61.
    a1 = a >> _U(32)
    a0 = a & _MASK32
    b1 = b >> _U(32)
    b0 = b & _MASK32
    mid = a1 * b0 + a0 * b1
    lo = a0 * b0
    hi = a1 * b1
    s = hi << _U(3)
    s += mid >> _U(29)
    s += (mid & _U((1 << 29) - 1)) << _U(32)
    s += (lo >> _U(61)) + (lo & _M61)
    s = (s & _M61) + (s >> _U(61))
    if s >= _M61:
        s -= _M61
    return s


@njit(cache=True)
def _nb_first_m61(buf, ell, base, drop, cand, first):
    n = buf.shape[0]
    nc = cand.shape[0]
    if n < ell or nc == 0:
        return
    fp = _U(0)
    for t in range(ell):
        fp = _mulmod61(fp, base) + _U(buf[t])
        if fp >= _M61:
            fp -= _M61
    fmin = cand[0]
    fmax = cand[nc - 1]
    found = 0
    p = 0
    while True:
        if fmin <= fp <= fmax:
            lo = 0
            hi = nc
            while lo < hi:
                mid = (lo + hi) // 2
                if cand[mid] < fp:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < nc and cand[lo] == fp and first[lo] == 0:
                first[lo] = p + 1
                found += 1
                if found == nc:
                    return
        if p + ell >= n:
            return
        fp = fp + _M61 - _mulmod61(_U(buf[p]), drop)
        fp = (fp & _M61) + (fp >> _U(61))
        fp = _mulmod61(fp, base) + _U(buf[p + ell])
        if fp >= _M61:
            fp -= _M61
        p += 1


@njit(cache=True)
def _nb_fps_at_m61(buf, ell, base, drop, offsets, out):
    m = offsets.shape[0]
    if m == 0:
        return
    lo = offsets[0]
    fp = _U(0)
    for t in range(lo, lo + ell):
        fp = _mulmod61(fp, base) + _U(buf[t])
        if fp >= _M61:
            fp -= _M61
    pos = lo
    for idx in range(m):
        off = offsets[idx]
        while pos < off:
            fp = fp + _M61 - _mulmod61(_U(buf[pos]), drop)
            fp = (fp & _M61) + (fp >> _U(61))
            fp = _mulmod61(fp, base) + _U(buf[pos + ell])
            if fp >= _M61:
                fp -= _M61
            pos += 1
        out[idx] = fp


@njit(cache=True)
def _nb_first_small(buf, ell, base, drop, mod, cand, first):
    # mod < 2**31, so fp * base + byte < 2**62 never wraps.
    n = buf.shape[0]
    nc = cand.shape[0]
    if n < ell or nc == 0:
        return
    fp = _U(0)
    for t in range(ell):
        fp = (fp * base + _U(buf[t])) % mod
    fmin = cand[0]
    fmax = cand[nc - 1]
    found = 0
    p = 0
    while True:
        if fmin <= fp <= fmax:
            lo = 0
            hi = nc
            while lo < hi:
                mid = (lo + hi) // 2
                if cand[mid] < fp:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < nc and cand[lo] == fp and first[lo] == 0:
                first[lo] = p + 1
                found += 1
                if found == nc:
                    return
        if p + ell >= n:
            return
        sub = (_U(buf[p]) * drop) % mod
        fp = ((fp + mod - sub) * base + _U(buf[p + ell])) % mod
        p += 1


@njit(cache=True)
def _nb_fps_at_small(buf, ell, base, drop, mod, offsets, out):
    m = offsets.shape[0]
    if m == 0:
        return
    lo = offsets[0]
    fp = _U(0)
    for t in range(lo, lo + ell):
        fp = (fp * base + _U(buf[t])) % mod
    pos = lo
    for idx in range(m):
        off = offsets[idx]
        while pos < off:
            sub = (_U(buf[pos]) * drop) % mod
            fp = ((fp + mod - sub) * base + _U(buf[pos + ell])) % mod
            pos += 1
        out[idx] = fp


# -- dispatchers ---------------------------------------------------------


def _kernel_ok(modulus: int, size: int) -> bool:
    return (
        HAVE_NUMBA
        and size >= KERNEL_MIN_BYTES
        and (modulus == M61 or modulus < _SMALL_MOD_LIMIT)
    )


def first_occurrences(
    buf, ell: int, base: int, modulus: int, cand_fps: Iterable[int]
) -> dict[int, int]:
    """Dispatching front end for the sliding-window membership scan."""
    fps = sorted(set(cand_fps))
    if not fps or len(buf) < ell:
        return {}
    if not _kernel_ok(modulus, len(buf)):
        return py_first_occurrences(buf, ell, base, modulus, fps)
    arr = np.frombuffer(bytes(buf), dtype=np.uint8)
    cand = np.array(fps, dtype=np.uint64)
    first = np.zeros(len(fps), dtype=np.int64)
    drop = pow(base, ell - 1, modulus)
    if modulus == M61:
        _nb_first_m61(arr, ell, _U(base), _U(drop), cand, first)
    else:
        _nb_first_small(arr, ell, _U(base), _U(drop), _U(modulus), cand, first)
    return {fp: int(pos) for fp, pos in zip(fps, first) if pos}


def fps_at(buf, ell: int, offsets: Sequence[int], base: int, modulus: int) -> list[int]:
    """Dispatching front end for block-fingerprint extraction."""
    if not offsets:
        return []
    if not _kernel_ok(modulus, len(buf)):
        return py_fps_at(buf, ell, offsets, base, modulus)
    arr = np.frombuffer(bytes(buf), dtype=np.uint8)
    offs = np.array(offsets, dtype=np.int64)
    out = np.zeros(len(offsets), dtype=np.uint64)
    drop = pow(base, ell - 1, modulus)
    if modulus == M61:
        _nb_fps_at_m61(arr, ell, _U(base), _U(drop), offs, out)
    else:
        _nb_fps_at_small(arr, ell, _U(base), _U(drop), _U(modulus), offs, out)
    return [int(v) for v in out]
