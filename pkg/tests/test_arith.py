import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lfkit.arith import (
    dirichlet_convolve,
    dirichlet_inverse_array,
    factorize,
    iroot,
    is_prime,
    multiplicative_array,
    prime_sieve,
    series_divide,
    spf_sieve,
)


def test_prime_sieve_small():
    assert list(prime_sieve(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(prime_sieve(10**4)) == 1229


def test_spf_and_is_prime_agree():
    spf = spf_sieve(500)
    for n in range(2, 501):
        assert (spf[n] == n) == is_prime(n)


@given(st.integers(min_value=1, max_value=10**9))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


@given(st.integers(min_value=0, max_value=10**30), st.integers(min_value=1, max_value=7))
def test_iroot_is_floor(n, k):
    r = iroot(n, k)
    assert r**k <= n < (r + 1) ** k


def test_mobius_is_inverse_of_one():
    one = np.ones(101)
    one[0] = 0
    mu = dirichlet_inverse_array(one)
    assert [int(x) for x in mu[1:11]] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    unit = dirichlet_convolve(one, mu)
    assert unit[1] == 1 and not unit[2:].any()


def test_divisor_count_by_convolution():
    one = np.ones(61, dtype=np.int64)
    one[0] = 0
    d = dirichlet_convolve(one, one)
    assert d[60] == 12 and d[1] == 1 and d[37] == 2


def test_multiplicative_array_matches_direct():
    # sigma_1 from prime powers
    arr = multiplicative_array(lambda p, m: (p ** (m + 1) - 1) // (p - 1), 200, dtype=np.int64)
    for n in (1, 12, 97, 128, 180):
        assert arr[n] == sum(d for d in range(1, n + 1) if n % d == 0)


@settings(max_examples=30)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8))
def test_series_divide_inverts_multiplication(den_tail):
    den = [1] + den_tail
    num = [1, 2, 3]
    M = 10
    q = series_divide(num, den, M)
    prod = [sum(q[j] * den[m - j] for j in range(m + 1) if m - j < len(den)) for m in range(M + 1)]
    assert prod == [num[m] if m < len(num) else 0 for m in range(M + 1)]
