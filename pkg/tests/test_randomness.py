import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boltzdag.randomness import RandomSource, check_random_source


def raw_bits(seed, count):
    words = np.random.PCG64(seed).random_raw(-(-count // 64) + 1)
    return np.unpackbits(words.astype("<u8").view(np.uint8), bitorder="little")[:count]


def test_stream_is_pcg64_words_lsb_first():
    src = RandomSource(11)
    got = [src.next_bit() for _ in range(200)]
    assert got == raw_bits(11, 200).tolist()
    assert src.bits_consumed == 200


@given(st.lists(st.integers(0, 150), max_size=12), st.integers(0, 2**64 - 1))
@settings(max_examples=60, deadline=None)
def test_mixed_reads_follow_one_stream(chunks, seed):
    src = RandomSource(seed)
    out = []
    for i, c in enumerate(chunks):
        if i % 2:
            out.extend(src.take_bit_array(c).tolist())
        else:
            v = src.take_bits(c)
            out.extend((v >> j) & 1 for j in range(c))
    assert out == raw_bits(seed, len(out)).tolist()
    assert src.bits_consumed == sum(chunks)


def test_same_seed_same_stream():
    a, b = RandomSource(5), RandomSource(5)
    assert [a.uniform_int(1000) for _ in range(50)] == [b.uniform_int(1000) for _ in range(50)]


def test_bernoulli_half_costs_one_bit():
    src = RandomSource(3)
    for _ in range(1000):
        src.bernoulli(0.5)
    assert src.bits_consumed == 1000


def test_bernoulli_expected_cost_two_bits():
    src = RandomSource(4)
    for _ in range(20000):
        src.bernoulli(0.3)
    assert 1.9 < src.bits_consumed / 20000 < 2.1


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_bernoulli_degenerate_is_free(p):
    src = RandomSource(1)
    assert src.bernoulli(p) == (p == 1.0)
    assert src.bits_consumed == 0


@pytest.mark.parametrize("p", [0.1, 1 / 3, 0.75, 0.999])
def test_bernoulli_frequency(p):
    src = RandomSource(8)
    n = 40000
    hits = sum(src.bernoulli(p) for _ in range(n))
    assert abs(hits / n - p) < 4 * (p * (1 - p) / n) ** 0.5


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_bernoulli_rejects_bad_probability(p):
    with pytest.raises(ValueError):
        RandomSource(0).bernoulli(p)


def test_uniform_int_is_unbiased_and_in_range():
    src = RandomSource(2)
    counts = np.bincount([src.uniform_int(6) for _ in range(60000)], minlength=6)
    assert counts.size == 6
    assert np.all(np.abs(counts - 10000) < 450)


def test_uniform_int_one_is_free():
    src = RandomSource(2)
    assert src.uniform_int(1) == 0 and src.bits_consumed == 0
    with pytest.raises(ValueError):
        src.uniform_int(0)


def test_uniform_unit_uses_53_bits():
    src = RandomSource(9)
    x = src.uniform_unit()
    assert 0.0 <= x < 1.0 and src.bits_consumed == 53


@given(st.integers(0, 30), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_random_permutation_is_a_permutation(n, seed):
    assert sorted(RandomSource(seed).random_permutation(n)) == list(range(1, n + 1))


def test_random_permutation_uniform_on_three():
    src = RandomSource(6)
    from collections import Counter
    c = Counter(tuple(src.random_permutation(3)) for _ in range(30000))
    assert len(c) == 6 and all(abs(v - 5000) < 350 for v in c.values())


def test_seed_validation_and_coercion():
    with pytest.raises(ValueError):
        RandomSource(-1)
    with pytest.raises(ValueError):
        RandomSource(2**64)
    s = RandomSource(3)
    assert check_random_source(s) is s
    assert check_random_source(7).seed == 7
    assert isinstance(check_random_source(None), RandomSource)
    with pytest.raises(TypeError):
        check_random_source("seed")
