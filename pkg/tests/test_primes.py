import math

import numpy as np
import pytest

from drhlab.characters import CHI4
from drhlab.errors import CacheCorruptError, InvalidRangeError, RangeTooLargeError
from drhlab.primes import (
    MangoldtValue,
    chebyshev_psi,
    count_by_class,
    mangoldt,
    mertens_sum,
    read_prime_cache,
    sieve_range,
    write_prime_cache,
)

from oracles import naive_mangoldt, naive_prime_list, naive_psi, trial_division_primes


def test_sieve_small_range():
    assert sieve_range(2, 30).primes.tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_sieve_count_to_1e6_matches_naive_oracle(primes_1e6):
    oracle = naive_prime_list(10**6)
    assert len(primes_1e6) == len(oracle) == 78498
    assert primes_1e6.primes[-1] == oracle[-1]


def test_sieve_race_neighborhood_matches_trial_division():
    assert sieve_range(26860, 26864).primes.tolist() == [26861, 26863]
    assert trial_division_primes(26860, 26864) == [26861, 26863]


@pytest.mark.parametrize("lo,hi", [(2, 10**5), (50, 12345), (999000, 1000000)])
def test_segmented_equals_monolithic(lo, hi):
    mono = sieve_range(lo, hi, segment_size=hi + 1)
    for seg in (1 << 10, 1 << 14, 997):
        assert np.array_equal(sieve_range(lo, hi, segment_size=seg).primes, mono.primes)


def test_sieve_thread_count_invariance():
    base = sieve_range(2, 200000, segment_size=1 << 14)
    for threads in (2, 4):
        got = sieve_range(2, 200000, segment_size=1 << 14, threads=threads)
        assert np.array_equal(got.primes, base.primes)


def test_sieve_errors():
    with pytest.raises(InvalidRangeError):
        sieve_range(10, 5)
    with pytest.raises(InvalidRangeError):
        sieve_range(1, 10)
    with pytest.raises(RangeTooLargeError):
        sieve_range(2, (1 << 40) + 1)


def test_count_by_class_hand_enumeration():
    assert count_by_class(20, 4) == {1: 3, 3: 4}


def test_count_by_class_violation_boundary():
    below = count_by_class(26860, 4)
    at = count_by_class(26861, 4)
    assert below[3] >= below[1]
    assert at[3] < at[1]


def test_count_partition_identity(primes_1e6):
    for x in (2, 3, 10, 97, 5000, 10**6):
        counts = count_by_class(x, 4, table=primes_1e6)
        total = len(primes_1e6.upto(x))
        assert counts[1] + counts[3] + (1 if x >= 2 else 0) == total


def test_mertens_four_terms_by_hand():
    assert mertens_sum(10) == pytest.approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7, abs=1e-15)


def test_mertens_monotone(primes_1e6):
    values = [mertens_sum(x, table=primes_1e6) for x in (10, 100, 10**4, 10**6)]
    assert values == sorted(values)


def test_mertens_deterministic_across_threads(primes_1e6):
    base = mertens_sum(10**6, table=primes_1e6)
    assert mertens_sum(10**6, table=primes_1e6) == base
    for threads in (2, 4, 16):
        assert mertens_sum(10**6, table=primes_1e6, threads=threads) == base


def test_psi_trivial_hand_value():
    expected = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
    assert chebyshev_psi(10) == pytest.approx(expected, abs=1e-12)


def test_psi_chi4_hand_value():
    # prime powers <= 10: 3, 5, 7, 9 contribute -log3, +log5, -log7, +log3
    assert chebyshev_psi(10, CHI4) == pytest.approx(math.log(5) - math.log(7), abs=1e-12)


@pytest.mark.parametrize("x", [10, 100, 1000])
def test_psi_matches_naive_oracle(x):
    assert chebyshev_psi(x) == pytest.approx(naive_psi(x), abs=1e-9)
    assert chebyshev_psi(x, CHI4) == pytest.approx(naive_psi(x, CHI4), abs=1e-9)


def test_psi_nondecreasing(primes_1e6):
    xs = [2, 3, 4, 10, 100, 10**3, 10**4, 10**5, 10**6]
    vals = [chebyshev_psi(x, table=primes_1e6) for x in xs]
    assert vals == sorted(vals)


def test_psi_thread_invariance(primes_1e6):
    base = chebyshev_psi(10**6, table=primes_1e6)
    for threads in (2, 4):
        assert chebyshev_psi(10**6, table=primes_1e6, threads=threads) == base


def test_mangoldt_values():
    assert mangoldt(1) == MangoldtValue(1, 0.0)
    for n in range(1, 200):
        got = mangoldt(n)
        assert got.value == pytest.approx(naive_mangoldt(n), abs=1e-15)
        assert (got.value > 0) == (naive_mangoldt(n) > 0)


def test_prime_cache_roundtrip(tmp_path):
    table = sieve_range(1000, 20000)
    path = str(tmp_path / "p.prmt")
    write_prime_cache(path, table)
    back = read_prime_cache(path)
    assert back.lo == 1000 and back.hi == 20000
    assert np.array_equal(back.primes, table.primes)


def test_prime_cache_empty_range(tmp_path):
    table = sieve_range(24, 28)
    assert len(table) == 0
    path = str(tmp_path / "empty.prmt")
    write_prime_cache(path, table)
    assert len(read_prime_cache(path)) == 0


def test_prime_cache_bad_magic(tmp_path):
    path = tmp_path / "bad.prmt"
    path.write_bytes(b"NOPE" + b"\x00" * 24)
    with pytest.raises(CacheCorruptError):
        read_prime_cache(str(path))
