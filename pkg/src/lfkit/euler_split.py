"""Three-way Euler-product splits and the unit-circle lemma.

Two split shapes are built, both as coefficient streams up to ``N``:

* ``theorem1``: a first factor over the primes outside the exceptional set
  ``S``, either ``prod (1 - a(p) p^-s)^-1`` (``shape="geometric"``, the
  default, completely multiplicative) or ``prod (1 + a(p) p^-s)``
  (``shape="linear"``, whose quotient has the coefficients
  ``b(p^m) = sum_l (-1)^l a(p)^l a(p^(m-l))``); the full local factors over
  ``S``; and the remaining quotient.
* ``theorem3``: the same with degree-two truncations
  ``1 + h(p) p^-s + h(p^2) p^-2s`` for a ratio ``h`` of two series.

Convolving the three streams returns the source coefficients.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from lfkit.arith import dirichlet_convolve, multiplicative_array, prime_sieve, series_divide
from lfkit.coefficients import CoefficientError, CoefficientSource, Ratio, dirichlet_inverse

THM3_EXPONENT = 0.1
THM3_CUTOFF = 10**4
THM3_DEPTH = 40


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class ExceptionalPrimeSet:
    """Finite exceptional prime set together with the bound it was scanned to."""

    primes: tuple[int, ...]
    variant: str
    completeness_bound: int
    eps: float | None = None
    c0: float | None = None
    cutoff: float | None = None
    exponent: float | None = None
    depth: int | None = None
    uncertified: tuple[int, ...] = ()
    _members: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.primes))

    def __contains__(self, p: int) -> bool:
        return p in self._members

    def __len__(self) -> int:
        return len(self.primes)


def build_exceptional_set(source: CoefficientSource, eps: float, c0: float, sieve_bound: int) -> ExceptionalPrimeSet:
    """Primes ``p <= sieve_bound`` with ``|a(p)| > p^(eps/2)`` or ``p < c0^(2/eps)``."""
    # closed at 1/2: the desk checks run at eps = 1/2 exactly
    if not 0 < eps <= 0.5:
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    if c0 < 3:
        raise ValueError(f"c0 must be >= 3, got {c0}")
    threshold = c0 ** (2 / eps)
    if threshold > sieve_bound:
        raise SplitError(f"sieve bound {sieve_bound} is below c0^(2/eps) = {threshold:.6g}")
    members = []
    for p in prime_sieve(int(sieve_bound)):
        p = int(p)
        if p < threshold or abs(source.coeff(p)) > p ** (eps / 2):
            members.append(p)
    return ExceptionalPrimeSet(tuple(members), "theorem1", int(sieve_bound), eps=eps, c0=c0)


def b_coefficient(source: CoefficientSource, p: int, m: int) -> complex:
    """``b(p^m) = sum_{l=0}^m (-1)^l a(p)^l a(p^(m-l))``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    ap = source.prime_power(p, 1)
    return sum((-ap) ** l * source.prime_power(p, m - l) for l in range(m + 1))


@dataclass
class EulerSplit:
    part1: np.ndarray
    part2: np.ndarray
    part3: np.ndarray
    source: np.ndarray
    variant: str
    exceptional: ExceptionalPrimeSet
    k_bound: dict[int, float] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.source) - 1

    def reconstruct(self) -> np.ndarray:
        return dirichlet_convolve(dirichlet_convolve(self.part1, self.part2), self.part3)

    def max_error(self) -> float:
        return float(np.max(np.abs(self.reconstruct()[1:] - self.source[1:])))

    def is_exact(self) -> bool:
        return bool(np.array_equal(self.reconstruct()[1:], self.source[1:]))

    def to_csv(self, path) -> None:
        rec = self.reconstruct()
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "part1", "part2", "part3", "reconstructed", "source", "abs_error"])
            for n in range(1, self.N + 1):
                w.writerow(
                    [n]
                    + [_fmt(x[n]) for x in (self.part1, self.part2, self.part3, rec, self.source)]
                    + [repr(float(abs(rec[n] - self.source[n])))]
                )


def _fmt(z: complex) -> str:
    z = complex(z)
    return repr(z.real) if z.imag == 0 else f"{z.real!r} {z.imag!r}"


def _local_stream(N: int, factor: Callable[[int, int], complex], primes: Iterable[int] | None, keep: bool) -> np.ndarray:
    """Multiplicative stream whose prime-power values are ``factor(p, m)`` on the
    selected primes (``keep=True``: primes in ``primes``; ``keep=False``: the rest)
    and 0 elsewhere."""
    chosen = frozenset(primes or ())

    def pp(p: int, m: int) -> complex:
        if (p in chosen) == keep:
            return factor(p, m)
        return 0j

    return multiplicative_array(pp, N)


def _require_multiplicative(source: CoefficientSource) -> None:
    if not source.multiplicative:
        raise SplitError(f"{source.kind} source is not multiplicative; no Euler product to split")
    if source.coeff(1) != 1:
        raise SplitError("the split needs a(1) = 1")


def e_coefficient(source: CoefficientSource, p: int, m: int) -> complex:
    """``e(p^m) = a(p^m) - a(p) a(p^(m-1))``: local coefficients of ``F_p(s) (1 - a(p) p^-s)``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 1 + 0j
    return source.prime_power(p, m) - source.prime_power(p, 1) * source.prime_power(p, m - 1)


def split_theorem1(
    source: CoefficientSource,
    eps: float,
    c0: float,
    N: int,
    sieve_bound: int | None = None,
    shape: str = "geometric",
) -> EulerSplit:
    """Split ``F = P1 P2 P3`` around the exceptional set ``S_eps``.

    ``shape="geometric"`` takes ``P1 = prod_{p not in S} (1 - a(p) p^-s)^-1``,
    whose coefficients ``c(n)`` are completely multiplicative, and puts
    ``e(p^m)`` into ``P3``.  ``shape="linear"`` takes the degree-one factors
    ``1 + a(p) p^-s`` instead (``c`` supported on squarefree integers) and
    puts the alternating ``b(p^m)`` into ``P3``.  Both reconstruct ``F``.
    """
    _require_multiplicative(source)
    if N < 1:
        raise ValueError("N must be >= 1")
    if shape not in ("geometric", "linear"):
        raise ValueError(f"shape must be 'geometric' or 'linear', got {shape!r}")
    bound = max(int(N), math.ceil(c0 ** (2 / eps)))
    if sieve_bound is not None:
        bound = max(bound, int(sieve_bound))
    S = build_exceptional_set(source, eps, c0, bound)
    ap: dict[int, complex] = {}

    def a_p(p: int) -> complex:
        if p not in ap:
            ap[p] = source.prime_power(p, 1)
        return ap[p]

    if shape == "geometric":

        def first(p: int, m: int) -> complex:
            return a_p(p) ** m

        def third(p: int, m: int) -> complex:
            return e_coefficient(source, p, m)

    else:

        def first(p: int, m: int) -> complex:
            return a_p(p) if m == 1 else 0j

        def third(p: int, m: int) -> complex:
            return b_coefficient(source, p, m)

    part1 = _local_stream(N, first, S.primes, keep=False)
    part2 = _local_stream(N, source.prime_power, S.primes, keep=True)
    part3 = _local_stream(N, third, S.primes, keep=False)
    return EulerSplit(part1, part2, part3, np.array(source.prefix(N)), "theorem1", S)


def complete_multiplicativity_failures(split: EulerSplit) -> list[tuple[int, int]]:
    """Prime powers ``p^m <= N`` (``p`` outside ``S``) with ``c(p^m) != c(p)^m``."""
    c = split.part1
    bad = []
    for p in prime_sieve(split.N):
        p = int(p)
        if p in split.exceptional:
            continue
        q, m = p * p, 2
        while q <= split.N:
            if c[q] != c[p] ** m:
                bad.append((p, m))
            q *= p
            m += 1
    return bad


@dataclass(frozen=True)
class BBoundReport:
    worst_ratio: float
    worst_at: tuple[int, int]
    failures: tuple[tuple[int, int, float], ...]
    checked: int

    @property
    def passed(self) -> bool:
        return not self.failures


def b_bound_audit(source: CoefficientSource, eps: float, c0: float, primes: Iterable[int], m_max: int) -> BBoundReport:
    """Check ``|b(p^m)| <= p^(m eps)`` for ``2 <= m <= m_max`` on exceptional-free primes."""
    primes = [int(p) for p in primes]
    if not primes:
        raise ValueError("empty prime range")
    S = build_exceptional_set(source, eps, c0, max(max(primes), math.ceil(c0 ** (2 / eps))))
    inside = [p for p in primes if p in S]
    if inside:
        raise SplitError(f"primes {inside[:5]} belong to the exceptional set")
    worst, worst_at, failures, checked = -1.0, (0, 0), [], 0
    for p in primes:
        for m in range(2, m_max + 1):
            ratio = abs(b_coefficient(source, p, m)) / p ** (m * eps)
            checked += 1
            if ratio > worst:
                worst, worst_at = ratio, (p, m)
            if ratio > 1:
                failures.append((p, m, ratio))
    return BBoundReport(worst, worst_at, tuple(failures), checked)


def ratio_coefficients(F: CoefficientSource, G: CoefficientSource, N: int) -> np.ndarray:
    """``h = a_F * a_G^{-1}`` up to ``N`` by Dirichlet convolution."""
    a = F.prefix(N)
    if a[1] != 1 or G.coeff(1) != 1:
        raise SplitError("ratio_coefficients needs a_F(1) = a_G(1) = 1")
    return dirichlet_convolve(np.array(a), dirichlet_inverse(G, N))


def _growth_certified(values: list[complex], p: int, exponent: float, depth: int) -> bool:
    """Certify ``|h(p^m)| <= p^(m exponent)`` for ``m > depth`` from the scanned run.

    Uses the geometric envelope ``|h(p^m)| <= C r^m`` fitted on the upper half
    of the scan (``r`` the largest ``|h(p^m)|^(1/m)``, ``C`` chosen to cover
    every scanned term); certified when ``r < p^exponent`` and the envelope
    is below the threshold from ``depth`` on.
    """
    half = max(1, depth // 2)
    mags = [abs(values[m]) for m in range(half, depth + 1)]
    if all(x == 0 for x in mags):
        return True
    r = max(x ** (1 / m) for m, x in zip(range(half, depth + 1), mags) if x > 0)
    r = max(r, 1.0)
    C = max(abs(values[m]) / r**m for m in range(1, depth + 1))
    target = p**exponent
    if r >= target:
        return False
    return C * (r / target) ** (depth + 1) <= 1


def theorem3_exceptional_set(
    h: CoefficientSource, N: int, cutoff: float = THM3_CUTOFF, exponent: float = THM3_EXPONENT, depth: int = THM3_DEPTH
) -> ExceptionalPrimeSet:
    """``S = {p : |h(p^m)| > p^(m exponent) for some m >= 1, or p <= cutoff}`` over ``p <= N``.

    Primes whose tail beyond ``depth`` cannot be certified are placed in ``S``
    and listed in ``uncertified``.
    """
    members, uncertified = [], []
    for p in prime_sieve(int(N)):
        p = int(p)
        if p <= cutoff:
            members.append(p)
            continue
        vals = [h.prime_power(p, m) for m in range(depth + 1)]
        if any(abs(vals[m]) > p ** (m * exponent) for m in range(1, depth + 1)):
            members.append(p)
        elif not _growth_certified(vals, p, exponent, depth):
            members.append(p)
            uncertified.append(p)
    return ExceptionalPrimeSet(
        tuple(members), "theorem3", int(N), cutoff=cutoff, exponent=exponent, depth=depth, uncertified=tuple(uncertified)
    )


def k_coefficients(h: CoefficientSource, p: int, M: int) -> list[complex]:
    """Local coefficients of ``H_p / (1 + h(p) x + h(p^2) x^2)`` up to ``x^M``."""
    num = [h.prime_power(p, m) for m in range(M + 1)]
    den = [1, num[1] if M >= 1 else 0, num[2] if M >= 2 else 0]
    return series_divide(num, den, M)


def k_tail_sum(h: CoefficientSource, p: int, sigma: float = 0.5, depth: int = THM3_DEPTH) -> float:
    """``sum_{m >= 3} |k(p^m)| p^(-m sigma)``: scanned to ``depth`` plus a geometric tail.

    The tail bound uses the largest ratio ``|k(p^m)| p^(-m sigma)`` root over
    the scanned range; ``inf`` when that rate is not below 1.
    """
    ks = k_coefficients(h, p, depth)
    terms = [abs(ks[m]) * p ** (-m * sigma) for m in range(3, depth + 1)]
    total = math.fsum(terms)
    half = max(3, depth // 2)
    rates = [abs(ks[m]) ** (1 / m) * p**-sigma for m in range(half, depth + 1) if ks[m] != 0]
    if not rates:
        return total
    r = max(rates)
    if r >= 1:
        return math.inf
    C = max(terms[m - 3] / r**m for m in range(3, depth + 1) if ks[m] != 0)
    return total + C * r ** (depth + 1) / (1 - r)


def split_theorem3(
    h: CoefficientSource,
    N: int,
    cutoff: float = THM3_CUTOFF,
    exponent: float = THM3_EXPONENT,
    depth: int = THM3_DEPTH,
    check_pairs: int = 200,
    seed: int = 0,
) -> EulerSplit:
    """Split ``H = Q1 Q2 Q3`` for a multiplicative ``h``.

    ``cutoff`` defaults to ``10^4`` so that below ``N = 10^4`` every prime is
    exceptional; lower it (e.g. 100) to see a nontrivial ``Q1`` at desk scale.
    """
    if not h.multiplicative:
        raise SplitError("split_theorem3 needs a multiplicative h")
    if h.coeff(1) != 1:
        raise SplitError("split_theorem3 needs h(1) = 1")
    src = np.array(h.prefix(N))
    _check_multiplicative(src, check_pairs, seed)
    S = theorem3_exceptional_set(h, N, cutoff, exponent, depth)
    kcache: dict[int, list[complex]] = {}

    def quad(p: int, m: int) -> complex:
        return h.prime_power(p, m) if m <= 2 else 0j

    def kk(p: int, m: int) -> complex:
        if p not in kcache or len(kcache[p]) <= m:
            kcache[p] = k_coefficients(h, p, max(m, 8))
        return kcache[p][m]

    part1 = _local_stream(N, quad, S.primes, keep=False)
    part2 = _local_stream(N, h.prime_power, S.primes, keep=True)
    part3 = _local_stream(N, kk, S.primes, keep=False)
    k_bound = {int(p): k_tail_sum(h, int(p), 0.5, depth) for p in prime_sieve(N) if int(p) not in S}
    return EulerSplit(part1, part2, part3, src, "theorem3", S, k_bound)


def _check_multiplicative(a: np.ndarray, pairs: int, seed: int) -> None:
    N = len(a) - 1
    if N < 6 or pairs <= 0:
        return
    rng = np.random.default_rng(seed)
    for _ in range(pairs):
        m = int(rng.integers(2, max(3, math.isqrt(N) + 1)))
        n = int(rng.integers(2, N // m + 1))
        if math.gcd(m, n) == 1 and m * n <= N:
            lhs, rhs = a[m * n], a[m] * a[n]
            if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)):
                raise SplitError(f"h is not multiplicative: h({m * n}) != h({m}) h({n})")


def ratio_source(F: CoefficientSource, G: CoefficientSource) -> Ratio:
    return Ratio(F, G)


@dataclass(frozen=True)
class LemmaResult:
    theta: complex
    value: float
    bound: float
    tol: float

    @property
    def slack(self) -> float:
        return self.value - self.bound


def lemma_theta(a: complex, b: complex, grid: int = 2048) -> LemmaResult:
    """Maximize ``|1 + theta a + theta^2 b|`` over ``|theta| = 1``.

    Uniform grid of ``grid`` angles followed by a golden-section refinement on
    the bracketing cell.  ``tol = 10 (|a| + 4|b|)/grid`` bounds the grid loss.
    """
    if grid < 64:
        raise ValueError("grid must be >= 64")
    a, b = complex(a), complex(b)

    def f(phi):
        z = np.exp(1j * phi)
        return np.abs(1 + z * a + z * z * b)

    phis = 2 * np.pi * np.arange(grid) / grid
    vals = f(phis)
    i = int(np.argmax(vals))
    h = 2 * np.pi / grid
    lo, hi = phis[i] - h, phis[i] + h
    g = (math.sqrt(5) - 1) / 2
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1, f2 = float(f(x1)), float(f(x2))
    for _ in range(60):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = float(f(x2))
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = float(f(x1))
    best_phi, best = (x1, f1) if f1 >= f2 else (x2, f2)
    if vals[i] > best:
        best_phi, best = phis[i], float(vals[i])
    return LemmaResult(
        theta=complex(np.exp(1j * best_phi)),
        value=best,
        bound=1 + (abs(a) + abs(b)) / 24,
        tol=10 * (abs(a) + 4 * abs(b)) / grid,
    )


@dataclass(frozen=True)
class LemmaScan:
    trials: int
    min_slack: float
    min_ratio: float
    max_ratio: float
    failures: tuple[tuple[complex, complex, float], ...]
    rows: tuple[tuple[complex, complex, float, float], ...] = ()


def lemma_scan(trials: int, grid: int = 2048, radius: float = 10.0, seed: int = 0) -> LemmaScan:
    """Random ``(a, b)`` with ``|a|, |b| <= radius``; ratio is ``24 (value - 1)/(|a| + |b|)``."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random((trials, 2)))
    ph = 2 * np.pi * rng.random((trials, 2))
    A = r[:, 0] * np.exp(1j * ph[:, 0])
    B = r[:, 1] * np.exp(1j * ph[:, 1])
    min_slack, ratios, failures, rows = math.inf, [], [], []
    for a, b in zip(A, B):
        res = lemma_theta(a, b, grid)
        rows.append((complex(a), complex(b), res.value, res.bound))
        min_slack = min(min_slack, res.slack)
        if res.slack < 0:
            failures.append((complex(a), complex(b), res.slack))
        s = abs(a) + abs(b)
        if s > 0:
            ratios.append(24 * (res.value - 1) / s)
    return LemmaScan(trials, min_slack, min(ratios), max(ratios), tuple(failures), tuple(rows))


__all__ = [
    "BBoundReport",
    "CoefficientError",
    "EulerSplit",
    "ExceptionalPrimeSet",
    "LemmaResult",
    "b_bound_audit",
    "b_coefficient",
    "complete_multiplicativity_failures",
    "e_coefficient",
    "build_exceptional_set",
    "k_coefficients",
    "k_tail_sum",
    "lemma_scan",
    "lemma_theta",
    "ratio_coefficients",
    "split_theorem1",
    "split_theorem3",
]
