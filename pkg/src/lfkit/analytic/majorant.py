"""Majorant checks, almost periods, three-lines propagation and domination witnesses.

All functions take "evaluables": vectorized callables ``s -> values`` such
as ``LFunction`` instances or ``FunctionEvaluable`` wrappers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from lfkit.analytic.lfunctions import T_MAX, FunctionEvaluable, LFunction, ZetaFunction
from lfkit.analytic.zeros import locate_zeros

PL_SLACK = 0.05
# relative size below which a convexity defect is indistinguishable from rounding
ROUNDING_FLOOR = 64 * np.finfo(float).eps


def _values(f, s) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    return np.asarray(f(s), dtype=np.complex128).reshape(s.shape)


class PiecewiseC:
    """``c(sigma)``: a constant, a callable, or a table of ``(sigma, c)`` pairs
    interpolated linearly and held constant beyond the ends."""

    def __init__(self, spec) -> None:
        if callable(spec):
            self._fn = spec
            self.table = None
        elif np.ndim(spec) == 0:
            c = float(spec)
            if c <= 0:
                raise ValueError("c must be positive")
            self._fn = lambda sig: np.full(np.shape(sig), c)
            self.table = ((0.0, c),)
        else:
            pts = sorted((float(a), float(b)) for a, b in spec)
            if not pts or any(b <= 0 for _, b in pts):
                raise ValueError("c table must be nonempty with positive values")
            xs, ys = np.array([p[0] for p in pts]), np.array([p[1] for p in pts])
            self._fn = lambda sig: np.interp(sig, xs, ys)
            self.table = tuple(pts)

    def __call__(self, sigma):
        return np.asarray(self._fn(np.asarray(sigma, dtype=np.float64)), dtype=np.float64)


@dataclass(frozen=True)
class Grid:
    n_sigma: int = 9
    n_t: int = 2001
    t_min: float = -30.0
    t_max: float = 30.0

    def points(self, sigma_min: float, sigma_max: float) -> np.ndarray:
        sig = np.linspace(sigma_min, sigma_max, self.n_sigma)
        ts = np.linspace(self.t_min, self.t_max, self.n_t)
        # t-major order so witnesses are reported by increasing height
        return (sig[None, :] + 1j * ts[:, None]).ravel()


def _as_grid(grid) -> Grid:
    if grid is None:
        return Grid()
    if isinstance(grid, Grid):
        return grid
    return Grid(*grid)


def _zero_refinement(f, sigma_min: float, sigma_max: float, grid: Grid, sigma_search: float | None) -> np.ndarray:
    """Points of the strip closest to zeros of ``f`` (located by the contour counter)."""
    if not isinstance(f, LFunction):
        return np.array([], dtype=np.complex128)
    lo = max(-0.5, sigma_min - 0.5) if sigma_search is None else sigma_search
    zs = locate_zeros(f, (lo, sigma_max, grid.t_min, grid.t_max))
    pts = []
    for z in zs:
        sig = min(max(z.s.real, sigma_min), sigma_max)
        for dt in (0.0, -2e-4, 2e-4, -1e-3, 1e-3):
            pts.append(complex(sig, z.s.imag + dt))
    return np.array(pts, dtype=np.complex128)


@dataclass(frozen=True)
class Witness:
    s: complex
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else math.inf


@dataclass(frozen=True)
class MajorantReport:
    passed: bool
    witness: Witness | None
    worst: Witness
    points: int
    violations: int


def majorant_check(
    F, f, strip, c_spec, grid=None, refine_zeros: bool = True, rtol: float = 1e-12
) -> MajorantReport:
    """Check ``|F(s)| <= c(sigma) |f(s)|`` on a grid of the strip.

    With ``refine_zeros`` and ``f`` a built-in, points next to the zeros of
    ``f`` are added, since that is where the inequality is most fragile.
    ``rtol`` absorbs rounding when the inequality is an equality.
    """
    sigma_min, sigma_max = (float(x) for x in strip)
    if not sigma_min < sigma_max:
        raise ValueError(f"empty strip {strip}")
    g = _as_grid(grid)
    c = PiecewiseC(c_spec)
    s = g.points(sigma_min, sigma_max)
    if refine_zeros:
        s = np.concatenate([s, _zero_refinement(f, sigma_min, sigma_max, g, None)])
    lhs = np.abs(_values(F, s))
    rhs = c(s.real) * np.abs(_values(f, s))
    viol = np.flatnonzero(lhs > rhs * (1 + rtol))
    ratio = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1), np.inf)
    iw = int(np.argmax(ratio))
    worst = Witness(complex(s[iw]), float(lhs[iw]), float(rhs[iw]))
    first = None
    if viol.size:
        # first by height among the violations
        i = int(viol[np.argmin(s[viol].imag)])
        first = Witness(complex(s[i]), float(lhs[i]), float(rhs[i]))
    return MajorantReport(viol.size == 0, first, worst, int(s.size), int(viol.size))


def sup_difference(f, A: float, tau: float, t_samples) -> float:
    """``max_t |f(A + i(t + tau)) - f(A + i t)|`` over the samples."""
    t = np.asarray(t_samples, dtype=np.float64)
    return float(np.max(np.abs(_values(f, A + 1j * (t + tau)) - _values(f, A + 1j * t))))


@dataclass(frozen=True)
class AlmostPeriodResult:
    tau: float
    sup: float
    found: bool
    eps: float
    candidates_checked: int


def almost_period_find(
    f, A: float, eps: float, search_range=(0.0, 500.0), t_samples=None, step: float | None = None
) -> AlmostPeriodResult:
    """Smallest grid ``tau`` in ``search_range`` whose sampled sup-difference is below ``eps``.

    ``f`` is tabulated once on a uniform ``t`` grid; the samples are snapped
    to it so every shift is an index offset.  Candidates are confirmed by
    direct evaluation at the unsnapped samples.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    lo, hi = (float(x) for x in search_range)
    if not 0 <= lo < hi:
        raise ValueError(f"bad search range {search_range}")
    if t_samples is None:
        t_samples = np.linspace(0.0, 50.0, 64)
    t = np.asarray(t_samples, dtype=np.float64)
    if step is None:
        # |d/dt f| estimated from the samples; grid fine enough to move f by < eps/4
        d = np.abs(_values(f, A + 1j * (t + 1e-4)) - _values(f, A + 1j * t)) / 1e-4
        step = eps / (4 * max(float(d.max()), 1e-3))
        step = min(step, (hi - lo) / 16)
    base = float(t.min())
    n_grid = int(math.ceil((float(t.max()) - base + hi) / step)) + 2
    u = base + step * np.arange(n_grid)
    G = _values(f, A + 1j * u)
    j = np.rint((t - base) / step).astype(np.int64)
    m_lo = max(1, int(math.ceil(lo / step)))
    m_hi = int(math.floor(hi / step))
    best_tau, best_sup, checked = math.nan, math.inf, 0
    chunk = 4096
    for start in range(m_lo, m_hi + 1, chunk):
        ms = np.arange(start, min(start + chunk, m_hi + 1))
        D = np.abs(G[j[None, :] + ms[:, None]] - G[j][None, :]).max(axis=1)
        k = int(np.argmin(D))
        if D[k] < best_sup:
            best_sup, best_tau = float(D[k]), float(ms[k] * step)
        for idx in np.flatnonzero(D < eps / 2):
            tau = float(ms[idx] * step)
            checked += 1
            sup = sup_difference(f, A, tau, t)
            if sup < eps:
                return AlmostPeriodResult(tau, sup, True, eps, checked)
    sup = sup_difference(f, A, best_tau, t) if math.isfinite(best_tau) else math.inf
    return AlmostPeriodResult(best_tau, sup, False, eps, checked)


@dataclass(frozen=True)
class PLReport:
    D_eta: float
    D_sigma: float
    D_A: float
    bound: float
    defect: float
    slack: float
    rounding_floored: bool

    @property
    def passed(self) -> bool:
        return self.defect <= self.slack


def pl_propagation_check(h, tau: float, A: float, eta_line: float, sigma_interior: float, t_samples, slack: float = PL_SLACK) -> PLReport:
    """Sampled three-lines test for ``h(s + i tau) - h(s)`` on ``eta < sigma < A``.

    ``defect = D(sigma) - D(eta)^((A - sigma)/(A - eta)) D(A)^((sigma - eta)/(A - eta))``;
    convexity says it is ``<= 0`` for the true sups.  A defect within
    rounding of the terms is reported as exactly 0.
    """
    if not eta_line < sigma_interior < A:
        raise ValueError("need eta_line < sigma_interior < A")
    D = [sup_difference(h, x, tau, t_samples) for x in (eta_line, sigma_interior, A)]
    a = (A - sigma_interior) / (A - eta_line)
    b = (sigma_interior - eta_line) / (A - eta_line)
    bound = D[0] ** a * D[2] ** b if D[0] > 0 and D[2] > 0 else 0.0
    defect = D[1] - bound
    floored = abs(defect) <= ROUNDING_FLOOR * max(D[1], bound)
    if floored:
        defect = 0.0
    return PLReport(D[0], D[1], D[2], bound, defect, slack, floored)


def euler_deflated_zeta(primes: Sequence[int] = (2, 3, 5, 7), t_max: float = T_MAX) -> FunctionEvaluable:
    """``zeta(s) prod_p (1 - p^-s)``: zeta divided by a partial Euler product, nonvanishing for sigma > 0."""
    z = ZetaFunction(t_max)
    ps = np.array(primes, dtype=np.float64)

    def fn(s):
        s = np.asarray(s, dtype=np.complex128)
        prod = np.prod(1 - np.exp(-s[..., None] * np.log(ps)), axis=-1)
        return np.asarray(z(s)) * prod

    return FunctionEvaluable(fn, f"zeta*prod(1-p^-s), p in {tuple(primes)}")


@dataclass(frozen=True)
class DominationRow:
    M: float
    witness: Witness | None
    verified: bool
    points: int


@dataclass(frozen=True)
class DominationReport:
    rows: tuple[DominationRow, ...]
    zeros_of_G: tuple[complex, ...]
    sigma_floor: float

    @property
    def witness_found(self) -> bool:
        return any(r.verified for r in self.rows)


def _verify(F, G, s: complex, M: float) -> bool:
    """Re-evaluate with error estimates: ``|F| - err > M (|G| + err)``."""
    if isinstance(F, LFunction) and isinstance(G, LFunction):
        pF, pG = F.evaluate(s), G.evaluate(s)
        return abs(pF.value) - pF.est_abs_error > M * (abs(pG.value) + pG.est_abs_error)
    return float(np.abs(_values(F, [s])[0])) > M * float(np.abs(_values(G, [s])[0]))


def domination_witness(F, G, sigma_floor: float, M_list, grid=None, width: float = 0.5) -> DominationReport:
    """Search ``sigma_floor <= sigma <= sigma_floor + width`` for ``|F(s)| > M |G(s)|``.

    The grid is refined at the points of the strip nearest to the zeros of
    ``G`` (located by bisection of winding-number counts).
    """
    if sigma_floor <= 0.5:
        raise ValueError(f"sigma_floor must exceed 1/2, got {sigma_floor}")
    g = _as_grid(grid)
    s = g.points(sigma_floor, sigma_floor + width)
    zeros: list[complex] = []
    if isinstance(G, LFunction):
        for z in locate_zeros(G, (0.25, 1.0, g.t_min, g.t_max)):
            zeros.append(z.s)
        # lowest zeros first
        zeros.sort(key=lambda z: (abs(z.imag), -z.imag))
        extra = []
        for z in zeros:
            sig = max(z.real, sigma_floor)
            extra += [complex(sig, z.imag + dt) for dt in (0.0, -1e-4, 1e-4, -5e-4, 5e-4)]
        s = np.concatenate([np.array(extra, dtype=np.complex128), s])
    n_near = s.size - g.n_sigma * g.n_t
    aF = np.abs(_values(F, s))
    aG = np.abs(_values(G, s))
    ratio = np.where(aG > 0, aF / np.where(aG > 0, aG, 1.0), np.inf)
    rows = []
    for M in M_list:
        M = float(M)
        witness, verified = None, False
        # points next to zeros of G (lowest zero first), then the plain grid by strength
        near = np.flatnonzero(ratio[:n_near] > M)
        rest = np.flatnonzero(ratio[n_near:] > M) + n_near
        order = [*near[:16], *rest[np.argsort(-ratio[rest])][:16]]
        for i in order:
            if _verify(F, G, complex(s[i]), M):
                witness = Witness(complex(s[i]), float(aF[i]), float(M * aG[i]))
                verified = True
                break
        rows.append(DominationRow(M, witness, verified, int(s.size)))
    return DominationReport(tuple(rows), tuple(zeros), float(sigma_floor))


__all__ = [
    "AlmostPeriodResult",
    "DominationReport",
    "DominationRow",
    "Grid",
    "MajorantReport",
    "PLReport",
    "PiecewiseC",
    "Witness",
    "almost_period_find",
    "domination_witness",
    "euler_deflated_zeta",
    "majorant_check",
    "pl_propagation_check",
    "sup_difference",
]
