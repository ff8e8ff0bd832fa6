import random

import pytest

from lzap.fingerprint import (
    MERSENNE61,
    FingerprintConfig,
    derive_base,
    fp_of,
    is_probable_prime,
    roll,
)


def direct_poly(data: bytes, base: int, mod: int) -> int:
    total = 0
    for k, b in enumerate(data):
        total += b * pow(base, len(data) - 1 - k, mod)
    return total % mod


@pytest.mark.parametrize("modulus", [MERSENNE61, 251, 1009])
def test_fp_matches_direct_polynomial(modulus):
    rng = random.Random(11)
    cfg = FingerprintConfig(modulus=modulus, seed=5)
    for _ in range(20):
        data = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 40)))
        assert fp_of(data, cfg) == direct_poly(data, cfg.base, modulus)


def test_fp_of_empty_is_zero():
    cfg = FingerprintConfig()
    assert fp_of(b"", cfg) == 0


@pytest.mark.parametrize("modulus", [MERSENNE61, 251])
@pytest.mark.parametrize("ell", [1, 2, 7, 16])
def test_roll_agrees_with_recompute(modulus, ell):
    rng = random.Random(ell)
    data = bytes(rng.randrange(256) for _ in range(120))
    cfg = FingerprintConfig(modulus=modulus, seed=3)
    fp = fp_of(data[:ell], cfg)
    for p in range(1, len(data) - ell + 1):
        fp = roll(fp, data[p - 1], data[p + ell - 1], ell, cfg)
        assert fp == fp_of(data[p : p + ell], cfg), p


def test_derive_base_deterministic_and_in_range():
    assert derive_base(7, 0, MERSENNE61) == derive_base(7, 0, MERSENNE61)
    seen = {derive_base(7, a, MERSENNE61) for a in range(10)}
    assert len(seen) == 10  # every retry re-rolls
    for a in range(10):
        assert 2 <= derive_base(7, a, 251) <= 249


def test_config_validation():
    with pytest.raises(ValueError):
        FingerprintConfig(modulus=4)  # too small
    with pytest.raises(ValueError):
        FingerprintConfig(modulus=2047)  # 23 * 89
    with pytest.raises(ValueError):
        FingerprintConfig(seed=-1)
    with pytest.raises(ValueError):
        FingerprintConfig(attempt=-2)


def test_config_power_cache():
    cfg = FingerprintConfig(modulus=251)
    assert cfg.power(0) == 1
    assert cfg.power(13) == pow(cfg.base, 13, 251)
    assert cfg.power(13) is cfg.power(13) or cfg.power(13) == cfg.power(13)


@pytest.mark.parametrize(
    "m,expected",
    [
        (0, False),
        (1, False),
        (2, True),
        (3, True),
        (4, False),
        (251, True),
        (561, False),  # Carmichael number
        (2047, False),
        (MERSENNE61, True),
        ((1 << 31) - 1, True),
    ],
)
def test_is_probable_prime(m, expected):
    assert is_probable_prime(m) is expected
