import random

import pytest

from conftest import (
    EXAMPLE,
    EXAMPLE_PHRASES,
    EXAMPLE_SCHEDULE,
    EXAMPLE_SLIDING_PASSES,
    EXAMPLE_STEP,
    EXAMPLE_TEXTS,
    phrase_tuples,
    rand_bytes,
)
from lzap.codec import VerificationError, decode, encode
from lzap.iomodel import IoConfig, SequentialReader
from lzap.parse_core import (
    Interval,
    Params,
    Parse,
    Phrase,
    build_schedule,
    parse,
    parse_bytes,
    shrink,
)
from reference_impl import ref_schedule, reference_parse


def example_params(**kw):
    return Params(n=21, epsilon=0.5, step=EXAMPLE_STEP, **kw)


# -- parameters and schedule -------------------------------------------------


def test_params_validation():
    for bad in (dict(n=-1, epsilon=0.5), dict(n=5, epsilon=0.0),
                dict(n=5, epsilon=1.2), dict(n=5, epsilon=0.5, step=1.0),
                dict(n=5, epsilon=0.5, seed=-3), dict(n=5, epsilon=0.5, sigma=-1)):
        with pytest.raises(ValueError):
            Params(**bad)


def test_halve_epsilon_changes_effective_value_only():
    p = Params(n=100, epsilon=0.8, halve_epsilon=True)
    assert p.effective_epsilon == 0.4
    assert p.epsilon == 0.8
    assert p.step_value() == 100.0**0.4


def test_shrink_pinned_values():
    p = example_params()
    assert shrink(21, p) == 16
    assert shrink(12, p) == 9
    assert shrink(2, p) == 1
    with pytest.raises(ValueError):
        shrink(1, p)


def test_shrink_always_decreases():
    for n, eps in [(2, 1.0), (10, 0.1), (1000, 0.5), (12345, 0.25)]:
        p = Params(n=n, epsilon=eps)
        for ell in range(2, min(n, 300) + 1):
            assert 1 <= shrink(ell, p) < ell


def test_schedule_pinned():
    sched = build_schedule(example_params())
    assert sched.lengths == EXAMPLE_SCHEDULE
    assert sched.step == 4.0


def test_schedule_matches_fraction_reference():
    rng = random.Random(4)
    cases = [(n, rng.choice([0.2, 0.25, 0.5, 0.75, 1.0]))
             for n in rng.sample(range(2, 50_000), 40)]
    for n, eps in cases:
        p = Params(n=n, epsilon=eps)
        assert list(build_schedule(p).lengths) == ref_schedule(n, p.step_value())


def test_schedule_edges():
    assert build_schedule(Params(n=0, epsilon=0.5)).lengths == ()
    assert build_schedule(Params(n=1, epsilon=0.5)).lengths == (1,)
    lengths = build_schedule(Params(n=7, epsilon=1.0)).lengths
    assert lengths == (7, 6, 5, 4, 3, 2, 1)


# -- phrase and parse invariants ----------------------------------------------


def test_phrase_validation():
    Phrase(1, 1, 0, 97)
    Phrase(5, 3, 2)
    for bad in (dict(start=0, length=1, source=0, literal=97),
                dict(start=1, length=2, source=0, literal=97),
                dict(start=1, length=1, source=0),
                dict(start=1, length=1, source=0, literal=256),
                dict(start=3, length=1, source=3),
                dict(start=3, length=1, source=4),
                dict(start=2, length=2, source=1, literal=97)):
        with pytest.raises(ValueError):
            Phrase(**bad)


def test_parse_tiling_validation():
    Parse(2, (Phrase(1, 1, 0, 97), Phrase(2, 1, 0, 98)))
    Parse(3, (Phrase(1, 1, 0, 97), Phrase(2, 2, 1)))  # self-overlapping copy
    with pytest.raises(ValueError):
        Parse(2, (Phrase(1, 1, 0, 97),))  # undercovers
    with pytest.raises(ValueError):
        Parse(1, (Phrase(1, 1, 0, 97), Phrase(2, 1, 0, 98)))  # overcovers
    with pytest.raises(ValueError):
        Parse(3, (Phrase(1, 1, 0, 97), Phrase(3, 1, 0, 98)))  # gap
    with pytest.raises(ValueError):
        Parse(4, (Phrase(1, 1, 0, 97), Phrase(2, 3, 1), Phrase(5, 1, 0, 98)))


def test_interval_validation():
    assert Interval(3, 7, 4).length == 5
    with pytest.raises(ValueError):
        Interval(5, 4, 2)
    with pytest.raises(ValueError):
        Interval(0, 4, 2)
    with pytest.raises(ValueError):
        Interval(1, 4, 0)


# -- the parser itself ---------------------------------------------------------


def test_worked_example_phrases_and_passes():
    result, stats = parse_bytes(EXAMPLE, 0.5, step=EXAMPLE_STEP)
    assert tuple(phrase_tuples(result)) == EXAMPLE_PHRASES
    texts = tuple(
        EXAMPLE[ph.start - 1 : ph.start - 1 + ph.length] for ph in result.phrases
    )
    assert texts == EXAMPLE_TEXTS
    assert stats.sliding_passes == EXAMPLE_SLIDING_PASSES
    assert stats.attempts == 1
    assert stats.schedule_length == len(EXAMPLE_SCHEDULE)


def test_matches_content_exact_reference():
    rng = random.Random(99)
    for trial in range(40):
        sigma = rng.choice([1, 2, 4])
        data = rand_bytes(rng, sigma, rng.randrange(1, 400))
        eps = rng.choice([0.3, 0.5, 1.0])
        result, stats = parse_bytes(data, eps, seed=trial)
        step = Params(n=len(data), epsilon=eps).step_value()
        assert phrase_tuples(result) == reference_parse(data, step), (
            sigma, eps, data[:40])
        assert decode(encode(result)) == data


def test_deterministic_for_fixed_inputs():
    data = rand_bytes(random.Random(3), 3, 500)
    a = parse_bytes(data, 0.5, seed=7)
    b = parse_bytes(data, 0.5, seed=7)
    assert phrase_tuples(a[0]) == phrase_tuples(b[0])
    assert a[1].sliding_passes == b[1].sliding_passes
    assert a[1].io.bytes_read == b[1].io.bytes_read


def test_pass_billing_identity():
    # every sliding pass is a full traversal, so pass bytes and blocks
    # are exact multiples of the input size
    for data in (EXAMPLE, b"ab" * 700, rand_bytes(random.Random(1), 4, 2_000)):
        reader = SequentialReader(data, IoConfig(block_size=64))
        result, stats = parse(reader, Params(n=len(data), epsilon=0.5))
        io = stats.io
        assert io.passes == stats.sliding_passes
        assert io.bytes_read == io.passes * len(data)
        assert io.blocks_read == io.passes * (-(-len(data) // 64))


def test_levels_accounting():
    result, stats = parse_bytes(EXAMPLE, 0.5, step=EXAMPLE_STEP)
    assert [row.length for row in stats.levels] == list(EXAMPLE_SCHEDULE)
    assert sum(row.emitted for row in stats.levels) == len(result.phrases)
    assert sum(1 for row in stats.levels if row.pass_run) == stats.sliding_passes
    top = stats.levels[0]
    assert top.intervals == 1 and top.blocks == 1  # whole input, one block


def test_single_byte_and_empty_inputs():
    result, stats = parse_bytes(b"", 0.5)
    assert result.n == 0 and result.phrases == ()
    assert stats.schedule_length == 0 and stats.sliding_passes == 0
    result, stats = parse_bytes(b"q", 1.0)
    assert phrase_tuples(result) == [(1, 1, 0, ord("q"))]
    assert stats.sliding_passes == 0  # length-1 level needs no pass


def test_two_identical_halves():
    result, stats = parse_bytes(b"abcabc", 1.0)
    assert decode(encode(result)) == b"abcabc"
    copies = [ph for ph in result.phrases if not ph.is_literal]
    assert any(ph.length >= 3 for ph in copies)


def test_reader_length_must_match_params():
    with pytest.raises(ValueError):
        parse(SequentialReader(b"abc"), Params(n=4, epsilon=0.5))


def test_retry_after_collision_then_success():
    # modulus 127 with this seed corrupts attempt 1 and verifies attempt 2
    data = b"abcabcabcxyzxyzxyzabcxyz" * 8
    result, stats = parse_bytes(data, 0.5, seed=3, modulus=127)
    assert stats.attempts == 2
    assert stats.retries == 1
    assert decode(encode(result)) == data


def test_retry_budget_exhausted_raises():
    data = b"abcabcabcxyzxyzxyzabcxyz" * 8
    with pytest.raises(VerificationError) as info:
        parse_bytes(data, 0.5, seed=0, modulus=13, max_retries=2)
    assert info.value.attempts == 2


def test_query_log_records_every_lookup():
    from lzap.oracle import first_occurrence_bruteforce

    log = []
    result, _ = parse_bytes(EXAMPLE, 0.5, step=EXAMPLE_STEP, query_log=log)
    assert log, "expected first-occurrence queries on the example"
    for block_start, ell, occ in log:
        assert occ == first_occurrence_bruteforce(EXAMPLE, block_start, ell)


def test_short_table_preserves_output_and_saves_passes():
    data = (b"abba" * 300) + b"cadabra" * 40
    plain, plain_stats = parse_bytes(data, 0.5, seed=2)
    tabled, tabled_stats = parse_bytes(data, 0.5, seed=2, short_table_mem=100_000)
    assert phrase_tuples(plain) == phrase_tuples(tabled)
    assert tabled_stats.short_table_lengths  # something was covered
    assert tabled_stats.sliding_passes < plain_stats.sliding_passes
    # the table build itself is a billed traversal
    assert tabled_stats.io.passes == tabled_stats.sliding_passes + 1


def test_parse_bytes_routes_params_kwargs():
    result, stats = parse_bytes(b"ababab", 0.9, seed=5, halve_epsilon=True)
    assert stats.epsilon == 0.45
    assert stats.seed == 5
