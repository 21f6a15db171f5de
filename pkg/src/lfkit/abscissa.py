"""Abscissa estimators, smoothed sums and the reference abscissa bounds.

The estimators measure ``limsup log S(N) / log N`` where ``S(N)`` is
``sum_{n <= N} |a(n)|`` (absolute convergence) or ``max_{n <= N}
|sum_{m <= n} a(m)|`` (convergence).  The quotient behaves like
``alpha + c / log N``; three octave points are fitted in ``1 / log N`` and
the intercept is reported together with the local log-log slope over the
last three octaves.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from lfkit.coefficients import CoefficientSource


@dataclass(frozen=True)
class AbscissaEstimate:
    which: str
    value: float
    N_used: int
    tail_slope_diagnostic: float
    table: tuple[tuple[int, float], ...] = ()
    degenerate: bool = False
    floored: bool = False
    note: str = ""


def _quotients(S: np.ndarray, Ns: list[int]) -> list[float]:
    return [math.log(S[N]) / math.log(N) if S[N] > 0 else -math.inf for N in Ns]


def _estimate(which: str, S: np.ndarray, Nmax: int, nonzero_last: int) -> AbscissaEstimate:
    Ns = [Nmax // 4, Nmax // 2, Nmax]
    if S[Nmax] == 0:
        raise ValueError("partial sums are all zero; the estimator is undefined")
    if nonzero_last <= Nmax // 4:
        # finitely many nonzero terms: a Dirichlet polynomial
        return AbscissaEstimate(
            which, -math.inf, Nmax, 0.0, tuple(zip(Ns, _quotients(S, Ns))), degenerate=True,
            note="Dirichlet polynomial: abscissa is -inf",
        )
    qs = _quotients(S, Ns)
    x = np.array([1 / math.log(N) for N in Ns])
    value = float(np.polyfit(x, np.array(qs), 1)[1])
    lo = Nmax // 8
    slope = (math.log(S[Nmax]) - math.log(S[lo])) / math.log(Nmax / lo) if S[lo] > 0 else math.nan
    floored, note = False, ""
    if value <= 0.0 or (S[Nmax] == S[Nmax // 4] and which == "convergence"):
        value, floored, note = 0.0, True, "<= 0 within resolution"
    return AbscissaEstimate(which, value, Nmax, slope, tuple(zip(Ns, qs)), floored=floored, note=note)


def _check_nmax(Nmax: int) -> None:
    if Nmax < 1000:
        raise ValueError(f"Nmax must be >= 1000, got {Nmax}")


def _last_nonzero(a: np.ndarray) -> int:
    nz = np.flatnonzero(a[1:])
    return int(nz[-1]) + 1 if nz.size else 0


def estimate_sigma_a(source: CoefficientSource, Nmax: int) -> AbscissaEstimate:
    _check_nmax(Nmax)
    a = source.prefix(Nmax)
    S = np.cumsum(np.abs(a))
    return _estimate("absolute", S, Nmax, _last_nonzero(a))


def estimate_sigma_c(source: CoefficientSource, Nmax: int) -> AbscissaEstimate:
    _check_nmax(Nmax)
    a = source.prefix(Nmax)
    S = np.maximum.accumulate(np.abs(np.cumsum(a)))
    return _estimate("convergence", S, Nmax, _last_nonzero(a))


def write_estimate_csv(path, est: AbscissaEstimate) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "quotient"])
        for N, q in est.table:
            w.writerow([N, repr(q)])


def smoothing_cutoff(Y: float) -> int:
    """``ceil(3 Y log Y)``, with ``log Y`` replaced by 1 for ``Y < e``."""
    if Y < 1:
        raise ValueError(f"Y must be >= 1, got {Y}")
    return math.ceil(3 * Y * max(math.log(Y), 1.0))


def _stream(c, N: int) -> np.ndarray:
    if isinstance(c, CoefficientSource):
        return np.asarray(c.prefix(N))
    c = np.asarray(c)
    if len(c) <= N:
        out = np.zeros(N + 1, dtype=np.complex128)
        out[: len(c)] = c
        return out
    return c[: N + 1]


def smoothed_sum(c, sigma: float, t: float, Y: float, cutoff: int | None = None) -> complex:
    """``sum_{n <= 3 Y log Y} c(n) n^(-sigma - i t) e^(-n/Y)``.

    ``c`` is a source or a 1-based array; arrays shorter than the cutoff are
    zero-extended.
    """
    N = smoothing_cutoff(Y) if cutoff is None else int(cutoff)
    a = _stream(c, N)
    n = np.arange(1, N + 1, dtype=np.float64)
    terms = a[1:] * np.exp(-(sigma + 1j * t) * np.log(n) - n / Y)
    return complex(terms.sum())


@dataclass(frozen=True)
class BoundednessReport:
    sup: float
    arg_sup: tuple[float, float]
    per_Y: tuple[tuple[float, float], ...]
    nonincreasing: bool


def boundedness_probe(c, sigma: float, t_samples, Y_list) -> BoundednessReport:
    """Sup of ``|smoothed_sum|`` over sampled ``t`` for each ``Y``, and its trend in ``Y``."""
    ts = np.asarray(list(t_samples), dtype=np.float64)
    Ys = list(Y_list)
    if ts.size == 0 or not Ys:
        raise ValueError("boundedness_probe needs nonempty t and Y samples")
    per_Y = []
    best, best_at = -1.0, (math.nan, math.nan)
    for Y in Ys:
        N = smoothing_cutoff(Y)
        a = _stream(c, N)
        n = np.arange(1, N + 1, dtype=np.float64)
        w = a[1:] * n**-sigma * np.exp(-n / Y)
        logn = np.log(n)
        sup_Y, sup_t = -1.0, math.nan
        for chunk in np.array_split(ts, max(1, ts.size // 256)):
            vals = np.abs(np.exp(-1j * np.outer(chunk, logn)) @ w)
            j = int(np.argmax(vals))
            if vals[j] > sup_Y:
                sup_Y, sup_t = float(vals[j]), float(chunk[j])
        per_Y.append((float(Y), sup_Y))
        if sup_Y > best:
            best, best_at = sup_Y, (float(Y), sup_t)
    sups = [s for _, s in per_Y]
    nonincreasing = all(b <= a * (1 + 1e-9) for a, b in zip(sups, sups[1:]))
    return BoundednessReport(best, best_at, tuple(per_Y), nonincreasing)


@dataclass(frozen=True)
class EFactorCheck:
    Y: float
    left: float
    right: float

    @property
    def holds(self) -> bool:
        return self.left <= self.right


def e_factor_check(c, sigma: float, Y: float) -> EFactorCheck:
    """``sum_{n <= Y} |c(n)| n^-sigma`` against ``e sum_{n <= 3Y log Y} |c(n)| n^-sigma e^(-n/Y)``."""
    N = smoothing_cutoff(Y)
    a = np.abs(_stream(c, N))
    n = np.arange(1, N + 1, dtype=np.float64)
    w = a[1:] * n**-sigma
    left = float(w[: int(math.floor(Y))].sum())
    right = float(math.e * (w * np.exp(-n / Y)).sum())
    return EFactorCheck(Y, left, right)


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def contains(self, x: float, widen: float = 0.0) -> bool:
        return self.lower - widen <= x <= self.upper + widen


def bound_oracle_entire(d: float) -> Interval:
    """Range of the convergence abscissa for an entire function of degree ``d >= 1``."""
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    return Interval(0.5 - 1 / (2 * d), 1 - 2 / (d + 1))


def bound_oracle_lift(d: float, k: int) -> Interval:
    """Range of the absolute-convergence abscissa of a k-lift of a degree-``d`` function."""
    if d < 1 or k < 1:
        raise ValueError("bound_oracle_lift needs d >= 1 and k >= 1")
    return Interval(0.5 + 1 / (2 * k * d), 0.5 + 1 / (2 * k))


__all__ = [
    "AbscissaEstimate",
    "BoundednessReport",
    "EFactorCheck",
    "Interval",
    "bound_oracle_entire",
    "bound_oracle_lift",
    "boundedness_probe",
    "e_factor_check",
    "estimate_sigma_a",
    "estimate_sigma_c",
    "smoothed_sum",
    "smoothing_cutoff",
]
