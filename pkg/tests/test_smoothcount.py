import random

import pytest

from billingsley import (DomainError, ParameterError, build_rho_table,
                         configure_psi_memo, psi_bruteforce, psi_dickman,
                         psi_exact, rho)
from conftest import RHO_ORACLE


def test_bruteforce_examples(sieve5):
    assert psi_bruteforce(sieve5, 10, 2) == 4      # {1, 2, 4, 8}
    assert psi_bruteforce(sieve5, 100, 1) == 1     # only m = 1
    assert psi_bruteforce(sieve5, 37, 37) == 37    # everything is 37-smooth


def test_bruteforce_domain(sieve5):
    with pytest.raises(DomainError):
        psi_bruteforce(sieve5, 10**5 + 1, 2)
    with pytest.raises(ParameterError):
        psi_bruteforce(sieve5, 0, 2)


def test_exact_examples():
    assert psi_exact(1, 7) == 1
    assert psi_exact(10, 3) == 7                   # {1,2,3,4,6,8,9}
    assert psi_exact(10, 2) == 4
    assert psi_exact(37, 37) == 37
    assert psi_exact(100, 1) == 1


def test_exact_parameter_errors():
    with pytest.raises(ParameterError):
        psi_exact(-1, 2)
    with pytest.raises(ParameterError):
        psi_exact(10, 0)


def test_exact_equals_bruteforce_dense(sieve5):
    for x in range(1, 2000):
        for y in (1, 2, 3, 5, 7, 11, 13, x):
            assert psi_exact(x, y) == psi_bruteforce(sieve5, x, y), (x, y)


def test_exact_equals_bruteforce_large_spot(sieve7):
    for x, y in [(10**4, 10), (10**5, 50), (10**6, 997), (10**7, 3162), (10**6, 2)]:
        assert psi_exact(x, y) == psi_bruteforce(sieve7, x, y)


def test_monotone_in_x_and_y():
    rnd = random.Random(6)
    for _ in range(100):
        x = rnd.randint(2, 5000)
        y = rnd.randint(1, 120)
        base = psi_exact(x, y)
        assert psi_exact(x + rnd.randint(1, 50), y) >= base
        assert psi_exact(x, y + rnd.randint(1, 50)) >= base


def test_sandwich():
    rnd = random.Random(7)
    for _ in range(50):
        x = rnd.randint(1, 10**4)
        y = rnd.randint(1, x)
        v = psi_exact(x, y)
        assert 1 <= v <= x
        assert psi_exact(x, 1) == 1
        assert psi_exact(x, x) == x


def test_memo_capacity_does_not_change_results():
    baseline = [psi_exact(x, y) for x, y in [(10**5, 50), (10**6, 100), (12345, 11)]]
    configure_psi_memo(64)  # tiny LRU forces heavy eviction
    try:
        assert [psi_exact(x, y)
                for x, y in [(10**5, 50), (10**6, 100), (12345, 11)]] == baseline
    finally:
        configure_psi_memo(1 << 20)


def test_dickman_estimate(table):
    assert psi_dickman(table, 1000.0, 1000.0) == pytest.approx(1000.0)
    want = 10**6 * RHO_ORACLE[2.0]
    assert psi_dickman(table, 10**6, 10**3) == pytest.approx(want, rel=1e-9)
    want3 = 10**7 * RHO_ORACLE[3.0]
    assert psi_dickman(table, 10**7, 10 ** (7 / 3)) == pytest.approx(want3, rel=1e-8)


def test_dickman_domain_errors(table):
    with pytest.raises(ParameterError):
        psi_dickman(table, 10.0, 100.0)  # x < y
    small = build_rho_table(u_max=2.0, step=1e-3)
    with pytest.raises(DomainError):
        psi_dickman(small, 10**9, 10)  # u = 9 beyond u_max


def test_convergence_toward_rho2(table, sieve6):
    # |Psi(n, sqrt n)/n - rho(2)| shrinks with n (full ladder in acceptance)
    rho2 = rho(table, 2.0)
    errs = [abs(psi_bruteforce(sieve6, n, int(n**0.5)) / n - rho2)
            for n in (10**4, 10**5, 10**6)]
    assert errs[0] > errs[1] > errs[2]
