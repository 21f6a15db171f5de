"""Sieves and Dirichlet-series arithmetic on coefficient arrays.

Coefficient arrays are 1-based: ``a[n]`` holds the n-th coefficient and
``a[0]`` is unused (kept at 0).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np


def prime_sieve(nmax: int) -> np.ndarray:
    """Primes ``<= nmax`` (Eratosthenes)."""
    if nmax < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(nmax + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, int(nmax**0.5) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@lru_cache(maxsize=8)
def spf_sieve(nmax: int) -> np.ndarray:
    """Smallest prime factor of every ``n <= nmax`` (``spf[1] = 1``)."""
    spf = np.zeros(nmax + 1, dtype=np.int64)
    spf[1] = 1
    for p in prime_sieve(int(nmax**0.5) + 1):
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf.setflags(write=False)
    return spf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def iroot(n: int, k: int) -> int:
    """Largest integer ``r`` with ``r**k <= n``."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``(a * b)(n) = sum_{d | n} a(d) b(n/d)`` for ``n <= N``."""
    N = min(len(a), len(b)) - 1
    out = np.zeros(N + 1, dtype=np.result_type(a.dtype, b.dtype))
    nz = np.flatnonzero(a[1 : N + 1]) + 1
    for d in nz:
        out[d :: d] += a[d] * b[1 : N // d + 1]
    return out


def dirichlet_inverse_array(a: np.ndarray) -> np.ndarray:
    """Dirichlet inverse of ``a`` up to ``len(a) - 1``; needs ``a[1] != 0``."""
    N = len(a) - 1
    if N < 1 or a[1] == 0:
        raise ValueError("Dirichlet inverse needs a(1) != 0")
    dtype = np.result_type(a.dtype, np.float64)
    b = np.zeros(N + 1, dtype=dtype)
    acc = np.zeros(N + 1, dtype=dtype)
    inv1 = 1 / a[1]
    for n in range(1, N + 1):
        b[n] = ((1 if n == 1 else 0) - acc[n]) * inv1
        if b[n] != 0 and 2 * n <= N:
            acc[2 * n :: n] += b[n] * a[2 : N // n + 1]
    return b


def multiplicative_array(
    prime_power: Callable[[int, int], complex], N: int, dtype=np.complex128
) -> np.ndarray:
    """Assemble ``f(n)`` for ``n <= N`` from its values on prime powers."""
    spf = spf_sieve(max(N, 1))
    out = np.zeros(N + 1, dtype=dtype)
    if N >= 1:
        out[1] = 1
    cache: dict[tuple[int, int], complex] = {}
    for n in range(2, N + 1):
        p = int(spf[n])
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        key = (p, e)
        if key not in cache:
            cache[key] = prime_power(p, e)
        out[n] = cache[key] * out[m]
    return out


def series_divide(num: list, den: list, M: int) -> list:
    """First ``M + 1`` coefficients of the power series ``num / den``; ``den[0] != 0``."""
    if not den or den[0] == 0:
        raise ValueError("power-series division needs den[0] != 0")
    out = []
    for m in range(M + 1):
        acc = num[m] if m < len(num) else 0
        for j in range(1, min(m, len(den) - 1) + 1):
            acc -= den[j] * out[m - j]
        out.append(acc if den[0] == 1 else acc / den[0])
    return out
