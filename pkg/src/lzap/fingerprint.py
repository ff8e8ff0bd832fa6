"""Karp-Rabin fingerprints over byte strings.

Polynomial hashing modulo a prime, with the base drawn from a seeded RNG.
Equal byte strings always produce equal fingerprints; unequal strings may
collide. Collisions are legal here: callers are expected to verify emitted
phrases against the input afterwards and re-run with a fresh base (a new
attempt number mixed into the seed) when verification fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

MERSENNE61 = (1 << 61) - 1

# Witnesses that make Miller-Rabin deterministic for anything below 3.3e24,
# which covers every modulus this module accepts.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=64)
def is_probable_prime(m: int) -> bool:
    if m < 2:
        return False
    for p in _MR_WITNESSES:
        if m % p == 0:
            return m == p
    d = m - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=256)
def derive_base(seed: int, attempt: int, modulus: int) -> int:
    """Draw the hash base uniformly from [2, modulus - 2].

    The attempt number is mixed into the seed so that a retry after a
    failed verification re-rolls the base deterministically.
    """
    if modulus < 5:
        raise ValueError("modulus must be at least 5")
    rng = random.Random(((seed & 0xFFFFFFFFFFFFFFFF) << 32) ^ (attempt & 0xFFFFFFFF))
    return rng.randrange(2, modulus - 1)


@dataclass
class FingerprintConfig:
    """Modulus, seed, attempt counter, and the base derived from them."""

    modulus: int = MERSENNE61
    seed: int = 0
    attempt: int = 0
    base: int = field(init=False)
    _pows: dict[int, int] = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.modulus < 5:
            raise ValueError("modulus must be at least 5")
        if not is_probable_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        if self.seed < 0 or self.attempt < 0:
            raise ValueError("seed and attempt must be non-negative")
        self.base = derive_base(self.seed, self.attempt, self.modulus)

    def power(self, exponent: int) -> int:
        """base**exponent mod modulus, cached per exponent."""
        v = self._pows.get(exponent)
        if v is None:
            v = pow(self.base, exponent, self.modulus)
            self._pows[exponent] = v
        return v


def fp_of(data: bytes, cfg: FingerprintConfig) -> int:
    """Fingerprint of ``data``: sum of data[t] * base^(len-1-t) mod modulus."""
    v = 0
    base = cfg.base
    mod = cfg.modulus
    for c in data:
        v = (v * base + c) % mod
    return v


def roll(fp: int, out_byte: int, in_byte: int, ell: int, cfg: FingerprintConfig) -> int:
    """Slide a length-``ell`` window one byte to the right.

    ``fp`` covers the window that starts with ``out_byte``; the result
    covers the window that ends with ``in_byte``.
    """
    mod = cfg.modulus
    v = (fp - out_byte * cfg.power(ell - 1)) % mod
    return (v * cfg.base + in_byte) % mod
