import math
import random

import pytest

from billingsley import (DomainError, ParameterError, ResourceError, build_sieve,
                         mertens_constant_estimate, mertens_sum, mertens_sum_from,
                         power_ceil, power_floor)


def trial_division_primes(limit):
    out = []
    for m in range(2, limit + 1):
        if all(m % p for p in out if p * p <= m):
            out.append(m)
    return out


def test_small_primes_identified():
    sieve = build_sieve(10)
    assert sieve.primes().tolist() == [2, 3, 5, 7]


def test_spf_examples():
    sieve = build_sieve(100)
    assert sieve.smallest_prime_factor[9] == 3
    assert sieve.smallest_prime_factor[35] == 5
    assert sieve.smallest_prime_factor[97] == 97


def test_sieve_against_trial_division(sieve5):
    oracle = trial_division_primes(10**5)
    got = sieve5.primes()
    assert len(got) == len(oracle)
    assert got.tolist() == oracle


def test_spf_is_least_prime_divisor(sieve5):
    rnd = random.Random(3)
    spf = sieve5.smallest_prime_factor
    for _ in range(500):
        m = rnd.randint(2, 10**5)
        p = int(spf[m])
        assert m % p == 0
        assert all(m % d for d in range(2, p))


def test_factorize_reconstructs(sieve5):
    rnd = random.Random(4)
    for _ in range(200):
        m = rnd.randint(1, 10**5)
        fs = sieve5.factorize(m)
        assert math.prod(fs) == m
        assert fs == sorted(fs)
    with pytest.raises(DomainError):
        sieve5.factorize(10**5 + 1)


def test_sieve_parameter_and_resource_errors():
    with pytest.raises(ParameterError):
        build_sieve(1)
    with pytest.raises(ResourceError):
        build_sieve(10**9, memory_budget=1 << 20)


def test_largest_prime_factor_table(sieve5):
    lpf = sieve5.largest_prime_factor_table()
    assert lpf[1] == 1
    assert lpf[12] == 3
    assert lpf[97] == 97
    assert lpf[2 * 3 * 5 * 7] == 7


def test_mertens_examples(sieve5):
    assert mertens_sum(sieve5, 2, 10) == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7)
    assert mertens_sum(sieve5, 2, 2) == 0.5
    assert mertens_sum(sieve5, 24, 28) == 0.0


def test_mertens_constant_small_values(sieve5):
    want3 = 1 / 2 + 1 / 3 - math.log(math.log(3))
    assert mertens_constant_estimate(sieve5, 3) == pytest.approx(want3, abs=1e-12)
    want10 = (1 / 2 + 1 / 3 + 1 / 5 + 1 / 7) - math.log(math.log(10))
    assert mertens_constant_estimate(sieve5, 10) == pytest.approx(want10, abs=1e-12)


def test_mertens_domain_errors(sieve5):
    with pytest.raises(DomainError):
        mertens_sum(sieve5, 10, 5)
    with pytest.raises(DomainError):
        mertens_sum(sieve5, 2, 10**6)
    with pytest.raises(DomainError):
        mertens_constant_estimate(sieve5, 2)


def test_mertens_additive_when_accumulation_continues(sieve5):
    # ordered accumulation is additive over adjacent ranges when the second
    # leg continues from the first partial sum (fold over concatenation)
    for a, m, b in [(2, 97, 1000), (2, 500, 10**5), (11, 4999, 40000)]:
        whole = mertens_sum(sieve5, a, b)
        part = mertens_sum(sieve5, a, m)
        assert mertens_sum_from(sieve5, m + 1, b, start=part) == whole


def test_power_bounds_exact_integer_hits():
    assert power_floor(10**6, 0.5) == 1000
    assert power_ceil(10**6, 0.5) == 1000
    assert power_floor(100, 0.5) == 10
    assert power_ceil(100, 0.5) == 10
    assert power_floor(10**4, 0.25) == 10
    assert power_ceil(10**4, 0.25) == 10
    assert power_floor(7, 1.0) == 7
    assert power_ceil(7, 1.0) == 7
    assert power_floor(12345, 0.0) == 1
    assert power_ceil(12345, 0.0) == 1


def test_power_bounds_generic():
    assert power_floor(1000, 0.5) == 31
    assert power_ceil(1000, 0.5) == 32
    assert power_floor(10**7, 0.5) == 3162
    assert power_ceil(10**7, 0.5) == 3163
    assert power_floor(10**7, 0.3) == 125   # 10^2.1 = 125.89...
    assert power_ceil(10**7, 0.3) == 126


def test_power_bounds_against_exact_roots():
    # for dyadic t = a/2^s the comparison m <=> n^t is decidable in integers
    rnd = random.Random(5)
    for _ in range(200):
        n = rnd.randint(2, 10**7)
        s = rnd.randint(1, 6)
        a = rnd.randint(1, 2**s)
        t = a / 2**s
        fl, ce = power_floor(n, t), power_ceil(n, t)
        assert fl ** (2**s) <= n**a < (fl + 1) ** (2**s)
        assert (ce - 1) ** (2**s) < n**a <= ce ** (2**s)


def test_power_bounds_parameter_errors():
    with pytest.raises(ParameterError):
        power_floor(0, 0.5)
    with pytest.raises(ParameterError):
        power_ceil(10, -0.1)


def test_mertens_range_approximates_log_ratio(sieve7):
    # finite-n form: the reciprocal sum over [n^t, n^{t+dt}] is close to
    # log((t+dt)/t) already at n = 10^7
    n, t, dt = 10**7, 0.3, 0.05
    s = mertens_sum(sieve7, power_ceil(n, t), power_floor(n, t + dt))
    assert abs(s - math.log((t + dt) / t)) < 0.05


def test_primes_in_range(sieve5):
    assert sieve5.primes_in_range(10, 20).tolist() == [11, 13, 17, 19]
    assert sieve5.primes_in_range(24, 28).size == 0
