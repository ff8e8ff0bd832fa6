"""Shared test data: the worked 21-byte example and corpus generators."""

from __future__ import annotations

import random

import pytest

# Hand-checked example: every value below was derived by hand before any
# of the implementation existed, so the suite notices if the parser and
# the expectations drift together.
EXAMPLE = b"ababbabbaabbabbaababa"
EXAMPLE_STEP = 4.0
EXAMPLE_SCHEDULE = (21, 16, 12, 9, 7, 6, 5, 4, 3, 2, 1)
EXAMPLE_PHRASES = (
    (1, 1, 0, ord("a")),
    (2, 1, 0, ord("b")),
    (3, 2, 1, None),
    (5, 5, 2, None),
    (10, 9, 3, None),
    (19, 3, 1, None),
)
EXAMPLE_TEXTS = (b"a", b"b", b"ab", b"babba", b"abbabbaab", b"aba")
EXAMPLE_ORACLE_TEXTS = (b"a", b"b", b"abb", b"abbaa", b"bbabbaaba", b"ba")
EXAMPLE_SLIDING_PASSES = 10

ALPHABET = b"abcdefghijklmnopqrstuvwxyz"


def rand_bytes(rng: random.Random, sigma: int, length: int) -> bytes:
    letters = ALPHABET[:sigma]
    return bytes(rng.choice(letters) for _ in range(length))


def repetitive_corpus(seed: int, base_len: int = 1024, copies: int = 50,
                      rate: float = 0.01, sigma: int = 4) -> bytes:
    """copies mutated repeats of one random base string, concatenated."""
    rng = random.Random(seed)
    base = rand_bytes(rng, sigma, base_len)
    letters = ALPHABET[:sigma]
    out = bytearray()
    for _ in range(copies):
        copy = bytearray(base)
        for t in range(base_len):
            if rng.random() < rate:
                copy[t] = rng.choice([c for c in letters if c != copy[t]])
        out += copy
    return bytes(out)


def phrase_tuples(parse) -> list[tuple]:
    return [(ph.start, ph.length, ph.source, ph.literal) for ph in parse.phrases]


@pytest.fixture
def example_reader():
    from lzap.iomodel import SequentialReader

    return SequentialReader(EXAMPLE)
