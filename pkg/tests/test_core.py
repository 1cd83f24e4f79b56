import itertools

import pytest

from skipforge import (
    HeightSampler,
    LevelGenConfig,
    Ordering,
    SplitMix64,
    compare,
    decode_u64,
    encode_u64,
)


def test_compare_examples():
    assert compare(b"a", b"b") is Ordering.LESS
    assert compare(b"ab", b"ab") is Ordering.EQUAL
    assert compare(b"abc", b"ab") is Ordering.GREATER


def test_compare_prefix_rule():
    assert compare(b"", b"a") is Ordering.LESS
    assert compare(b"ab", b"abc") is Ordering.LESS


def test_compare_total_order_exhaustive():
    # every byte string of length <= 3 over a 4-symbol alphabet
    alphabet = [0, 1, 127, 255]
    universe = [b""]
    for n in (1, 2, 3):
        universe.extend(bytes(t) for t in itertools.product(alphabet, repeat=n))
    for a in universe:
        for b in universe:
            c = compare(a, b)
            assert c is (Ordering.EQUAL if a == b else Ordering.LESS if a < b else Ordering.GREATER)
            # antisymmetry
            assert compare(b, a) is Ordering(-c)
    # transitivity over a sample cube (full cube of 85^3 is excessive)
    sample = universe[::3]
    for a in sample:
        for b in sample:
            if compare(a, b) is not Ordering.LESS:
                continue
            for c in sample:
                if compare(b, c) is Ordering.LESS:
                    assert compare(a, c) is Ordering.LESS


def test_encode_u64_examples():
    assert encode_u64(0) == bytes(8)
    assert encode_u64(1) == bytes(7) + b"\x01"
    assert compare(encode_u64(5), encode_u64(6)) is Ordering.LESS


def test_encode_u64_order_preserving():
    rng = SplitMix64(3)
    values = sorted(rng.next_u64() for _ in range(500))
    encoded = [encode_u64(v) for v in values]
    assert encoded == sorted(encoded)
    for v in values:
        assert decode_u64(encode_u64(v)) == v


def test_encode_u64_range_errors():
    with pytest.raises(ValueError):
        encode_u64(-1)
    with pytest.raises(ValueError):
        encode_u64(1 << 64)


def test_level_gen_config_validation():
    with pytest.raises(ValueError):
        LevelGenConfig(p=1.0)
    with pytest.raises(ValueError):
        LevelGenConfig(p=-0.1)
    with pytest.raises(ValueError):
        LevelGenConfig(max_level=0)


def test_height_p_zero_always_one():
    sampler = HeightSampler(LevelGenConfig(p=0.0, seed=123))
    assert all(sampler.random_height() == 1 for _ in range(1000))


def test_height_capped_at_max_level_one():
    sampler = HeightSampler(LevelGenConfig(p=0.9, max_level=1, seed=7))
    assert all(sampler.random_height() == 1 for _ in range(1000))


def test_height_promotion_rate_half():
    # fraction promoted past height 1 is binomial(n, 1/2): 3 sigma band
    n = 100_000
    sampler = HeightSampler(LevelGenConfig(p=0.5, seed=2024))
    promoted = sum(1 for _ in range(n) if sampler.random_height() >= 2)
    sigma = (n * 0.25) ** 0.5
    assert abs(promoted - n * 0.5) <= 3 * sigma


def test_height_tail_distribution():
    n = 100_000
    sampler = HeightSampler(LevelGenConfig(p=0.5, seed=31337))
    heights = [sampler.random_height() for _ in range(n)]
    for k in range(1, 6):
        expected = 0.5 ** (k - 1)
        observed = sum(1 for h in heights if h >= k)
        sigma = (n * expected * (1 - expected)) ** 0.5
        assert abs(observed - n * expected) <= 3 * sigma, (k, observed)


def test_height_sequences_reproducible():
    a = HeightSampler(LevelGenConfig(seed=999))
    b = HeightSampler(LevelGenConfig(seed=999))
    assert [a.random_height() for _ in range(10_000)] == [
        b.random_height() for _ in range(10_000)
    ]


def test_height_golden_sequence():
    # pinned output for seed 42; guards the generator constants
    sampler = HeightSampler(LevelGenConfig(p=0.5, max_level=32, seed=42))
    assert [sampler.random_height() for _ in range(24)] == [
        1, 5, 2, 2, 3, 1, 1, 5, 1, 2, 1, 3, 1, 1, 1, 1, 1, 1, 1, 1, 4, 2, 3, 1,
    ]


def test_splitmix_next_below_bounds():
    rng = SplitMix64(0)
    draws = [rng.next_below(10) for _ in range(10_000)]
    assert min(draws) == 0 and max(draws) == 9
