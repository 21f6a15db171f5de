"""Constructive simultaneous inhomogeneous approximation and phase alignment.

Given ``theta_1..theta_k`` independent over the integers, targets ``beta`` and
``T, eta``, ``solve`` looks for ``t > T`` and integers ``n`` with
``|t theta_l - n_l - beta_l| < eta`` for every ``l``.  Small ``k`` is handled
by a windowed grid scan; larger ``k`` by closest-vector search on the lattice
spanned by ``(theta, weight)`` and the scaled identity, followed by a
one-dimensional minimax polish of ``t``.  Every returned solution is
re-verified in high precision; a failed search raises ``BudgetExhausted``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import mpmath
import numpy as np

WORK_DPS = 60
GRID_MAX_K = 3
WINDOW_STEPS = 1 << 14


class BudgetExhausted(RuntimeError):
    """No solution within the iteration budget; ``scanned`` records the range tried."""

    def __init__(self, message: str, scanned: tuple[float, float] | None = None):
        super().__init__(message)
        self.scanned = scanned


@dataclass(frozen=True)
class KroneckerTarget:
    thetas: tuple
    betas: tuple
    T: float
    eta: float
    labels: tuple = ()

    def __post_init__(self) -> None:
        with mpmath.workdps(WORK_DPS):
            thetas = tuple(mpmath.mpf(x) for x in self.thetas)
            betas = tuple(mpmath.mpf(x) for x in self.betas)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "betas", betas)
        if len(thetas) != len(betas) or not thetas:
            raise ValueError("thetas and betas must be nonempty and of equal length")
        if len(set(thetas)) != len(thetas):
            raise ValueError("thetas must be pairwise distinct")
        if not 0 < self.eta < 0.5:
            raise ValueError(f"eta must lie in (0, 1/2), got {self.eta}")
        if self.labels and len(self.labels) != len(thetas):
            raise ValueError("labels must match thetas")

    @property
    def k(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True)
class KroneckerSolution:
    t: mpmath.mpf
    n: tuple[int, ...]
    errors: tuple[float, ...]
    max_error: float
    method: str
    attempts: int

    @property
    def t_float(self) -> float:
        return float(self.t)


def component_errors(target: KroneckerTarget, t) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Nearest integers ``n_l`` and errors ``|t theta_l - n_l - beta_l|``, in high precision."""
    with mpmath.workdps(WORK_DPS + _extra_digits(t)):
        t = mpmath.mpf(t)
        ns, errs = [], []
        for th, b in zip(target.thetas, target.betas):
            x = t * th - b
            n = int(mpmath.nint(x))
            ns.append(n)
            errs.append(float(abs(x - n)))
    return tuple(ns), tuple(errs)


def _extra_digits(t) -> int:
    mag = abs(float(t)) if t else 0.0
    return int(math.log10(mag)) + 5 if mag > 1 else 0


def _verified(target: KroneckerTarget, t, method: str, attempts: int) -> KroneckerSolution | None:
    if not t > target.T:
        return None
    n, errs = component_errors(target, t)
    m = max(errs)
    if m < target.eta:
        with mpmath.workdps(WORK_DPS + _extra_digits(t)):
            t = mpmath.mpf(t)
        return KroneckerSolution(t, n, errs, m, method, attempts)
    return None


def _polish(target: KroneckerTarget, t0, n: Sequence[int], radius) -> mpmath.mpf:
    """Minimize ``max_l |t theta_l - n_l - beta_l|`` over ``|t - t0| <= radius`` (convex, ternary search)."""
    with mpmath.workdps(WORK_DPS + _extra_digits(t0)):
        lo = max(mpmath.mpf(t0) - radius, mpmath.mpf(target.T))
        hi = mpmath.mpf(t0) + radius
        cs = [nl + b for nl, b in zip(n, target.betas)]

        def g(t):
            return max(abs(t * th - c) for th, c in zip(target.thetas, cs))

        for _ in range(120):
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            if g(m1) <= g(m2):
                hi = m2
            else:
                lo = m1
        t = (lo + hi) / 2
        if t <= target.T:
            t = mpmath.mpf(target.T) + (hi - lo)
        return t


def _grid_solve(target: KroneckerTarget, budget: int) -> KroneckerSolution:
    th = np.array([float(x) for x in target.thetas])
    be = np.array([float(x) for x in target.betas])
    step = target.eta / (4 * np.max(np.abs(th)))
    base = float(target.T)
    idx = np.arange(1, WINDOW_STEPS + 1, dtype=np.float64)
    for w in range(budget):
        ts = base + step * (idx + w * WINDOW_STEPS)
        x = ts[:, None] * th[None, :] - be[None, :]
        err = np.abs(x - np.rint(x)).max(axis=1)
        ok = err < target.eta
        if w == 0 and ok[0]:
            # t just above T inherits the phases at T; skip that run
            run = int(np.argmin(ok)) if not ok.all() else ok.size
            ok[:run] = False
        hits = np.flatnonzero(ok)
        if hits.size:
            i = int(hits[0])
            n, _ = component_errors(target, ts[i])
            t = _polish(target, ts[i], n, mpmath.mpf(step) * 4)
            if t < ts[i] - step:
                # never polish back across the scanned non-hit gap
                t = mpmath.mpf(ts[i])
            sol = _verified(target, t, "grid", w + 1) or _verified(target, ts[i], "grid", w + 1)
            if sol is not None:
                return sol
    raise BudgetExhausted(
        f"no solution for t in ({base}, {base + step * WINDOW_STEPS * budget}] after {budget} windows",
        (base, base + step * WINDOW_STEPS * budget),
    )


def _lattice_solve(target: KroneckerTarget, budget: int, seed: int) -> KroneckerSolution:
    from fpylll import CVP, LLL, IntegerMatrix

    k = target.k
    eta = target.eta
    rng = np.random.default_rng(seed)
    # heuristic scale where a box of side eta around the target holds a lattice point
    log10_x0 = k * math.log10(1 / (2 * eta)) - 2
    T = float(target.T)
    for attempt in range(budget):
        log10_x = log10_x0 + 0.5 * attempt + float(rng.random())
        bits = int(3.33 * (log10_x + max(0.0, math.log10(max(T, 1.0))))) + 96
        with mpmath.workdps(int(bits / 3.3) + 20):
            X = mpmath.mpf(10) ** log10_x
            w = mpmath.mpf(eta) / X
            scale = mpmath.mpf(2) ** bits
            r0 = [int(mpmath.nint(scale * th)) for th in target.thetas] + [int(mpmath.nint(scale * w))]
            rows = [r0]
            for l in range(k):
                row = [0] * (k + 1)
                row[l] = -int(scale)
                rows.append(row)
            tc = mpmath.mpf(T) + X
            goal = [int(mpmath.nint(scale * b)) for b in target.betas] + [int(mpmath.nint(scale * w * tc))]
        A = IntegerMatrix.from_matrix(rows)
        LLL.reduction(A)
        v = CVP.closest_vector(A, goal)
        x0 = v[-1] // r0[-1]
        if x0 <= T:
            continue
        n, _ = component_errors(target, x0)
        t = _polish(target, x0, n, 2)
        sol = _verified(target, t, "lattice", attempt + 1) or _verified(target, x0, "lattice", attempt + 1)
        if sol is not None:
            return sol
    raise BudgetExhausted(f"lattice search found no solution in {budget} attempts")


def solve(target: KroneckerTarget, budget: int = 64, seed: int = 0) -> KroneckerSolution:
    """Find ``t > T`` and integers ``n`` with every ``|t theta_l - n_l - beta_l| < eta``."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if target.k <= GRID_MAX_K:
        return _grid_solve(target, budget)
    return _lattice_solve(target, budget, seed)


def prime_phase_targets(c_values: Mapping[int, complex], T: float, eta: float) -> KroneckerTarget:
    """Targets that turn ``c(p) p^(-it)`` into ``|c(p)|``.

    ``theta_p = -log p / (2 pi)`` and ``beta_p = -arg c(p) / (2 pi) mod 1``, so
    at a solution ``c(p) p^(-it) = c(p) e^(2 pi i t theta_p)`` is within
    ``2 pi eta`` in argument of the positive real axis.  Zero values are dropped.
    """
    primes = sorted(p for p, c in c_values.items() if c != 0)
    with mpmath.workdps(WORK_DPS):
        thetas = tuple(-mpmath.log(p) / (2 * mpmath.pi) for p in primes)
        betas = []
        for p in primes:
            c = complex(c_values[p])
            if c.imag == 0:
                beta = mpmath.mpf(0) if c.real > 0 else mpmath.mpf(1) / 2
            else:
                beta = -mpmath.arg(mpmath.mpc(c.real, c.imag)) / (2 * mpmath.pi)
                beta -= mpmath.floor(beta)
            betas.append(beta)
    return KroneckerTarget(thetas, tuple(betas), T, eta, tuple(primes))


def completely_multiplicative(c_values: Mapping[int, complex], N: int) -> np.ndarray:
    """Extend prime values to ``n <= N``; ``n`` with a prime factor outside the map gets 0."""
    from lfkit.arith import multiplicative_array

    def pp(p: int, m: int) -> complex:
        return complex(c_values.get(p, 0)) ** m

    return multiplicative_array(pp, N)


@dataclass(frozen=True)
class AlignmentReport:
    A: float
    B: float
    ratio: float
    N: int
    sigma: float
    Y: float
    t: float


def alignment_report(
    solution: KroneckerSolution | float, c_values: Mapping[int, complex], N: int, sigma: float, Y: float
) -> AlignmentReport:
    """``A = |sum c(n) n^(-sigma - it) e^(-n/Y)|``, ``B = sum |c(n)| n^(-sigma) e^(-n/Y)`` over ``n <= N``."""
    cutoff = 3 * Y * max(math.log(Y), 1.0)
    if N > cutoff:
        raise ValueError(f"N = {N} exceeds 3 Y log Y = {cutoff:.3f}")
    t = solution.t if isinstance(solution, KroneckerSolution) else mpmath.mpf(solution)
    c = completely_multiplicative(c_values, int(N))
    ns = np.flatnonzero(c[1:]) + 1
    with mpmath.workdps(WORK_DPS + _extra_digits(t)):
        tt = mpmath.mpf(t)
        # reduce t log n mod 2 pi in high precision before leaving mpmath
        phases = np.array([float(mpmath.fmod(tt * mpmath.log(int(n)), 2 * mpmath.pi)) for n in ns])
    weights = ns.astype(np.float64) ** -sigma * np.exp(-ns / Y)
    terms = c[ns] * weights * np.exp(-1j * phases)
    A = float(abs(terms.sum()))
    B = float((np.abs(c[ns]) * weights).sum())
    return AlignmentReport(A, B, A / B if B else 1.0, int(N), sigma, Y, float(t))


def solution_rows(target: KroneckerTarget, solution: KroneckerSolution) -> list[tuple]:
    labels = target.labels or tuple(range(1, target.k + 1))
    return [
        (lab, float(th), float(b), n, e)
        for lab, th, b, n, e in zip(labels, target.thetas, target.betas, solution.n, solution.errors)
    ]


def write_solution_csv(path, target: KroneckerTarget, solution: KroneckerSolution) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["prime", "theta", "beta", "n", "error"])
        for row in solution_rows(target, solution):
            w.writerow([row[0], repr(row[1]), repr(row[2]), row[3], repr(row[4])])
