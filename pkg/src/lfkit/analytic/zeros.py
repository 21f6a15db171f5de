"""Argument-principle zero counting, zero localization and set comparison.

The winding number of ``f`` around a rectangle is obtained by tracking the
phase of ``f`` along the boundary: edges are sampled, and a segment is
bisected until ``|f(b) - f(a)| <= min(|f(a)|, |f(b)|) / 2``, which forces the
phase change on it below pi/6 and rules out an unseen full turn.  A zero
closer than ``near_tol`` to an edge (estimated as ``|f| / |f'|`` at sampled
minima) moves that edge by ``nudge`` and the count is redone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from lfkit.analytic.lfunctions import SIGMA_MAX

H0 = 0.05
MAX_DEPTH = 18
NEAR_TOL = 1e-4
NUDGE = 1e-3
MAX_NUDGES = 6
INTEGER_TOL = 0.05


class ContourError(RuntimeError):
    """A zero (or pole) sits on the contour and nudging did not clear it."""


@dataclass(frozen=True)
class ZeroCountResult:
    rectangle: tuple[float, float, float, float]
    count: int
    pole_correction: int
    min_edge_modulus: float
    winding_raw: float = 0.0
    requested: tuple[float, float, float, float] | None = None
    nudges: int = 0
    evaluations: int = 0

    @property
    def nudged(self) -> bool:
        return self.nudges > 0


def _values(f, s: np.ndarray) -> np.ndarray:
    return np.asarray(f(s), dtype=np.complex128).reshape(s.shape)


def _pole_of(f) -> tuple[complex | None, int]:
    return getattr(f, "pole", None), int(getattr(f, "pole_order", 0) or 0)


class _NearContour(Exception):
    def __init__(self, edge: int):
        self.edge = edge


def _edge_points(a: complex, b: complex, h: float) -> np.ndarray:
    n = max(2, int(math.ceil(abs(b - a) / h)))
    return a + (b - a) * np.arange(n) / n


def _refine(f, z, v, seg_edge, mask):
    """Insert the midpoint of every segment ``z[i] -> z[i + 1]`` flagged in ``mask``."""
    z_next = np.roll(z, -1)
    mid = (z[mask] + z_next[mask]) / 2
    vm = _values(f, mid)
    idx = np.flatnonzero(mask) + 1
    z = np.insert(z, idx, mid)
    v = np.insert(v, idx, vm)
    seg_edge = np.insert(seg_edge, idx, seg_edge[idx - 1])
    return z, v, seg_edge, len(mid)


def _winding(f, rect, h0: float, max_depth: int, near_tol: float) -> tuple[float, float, int]:
    s0, s1, t0, t1 = rect
    corners = [complex(s0, t0), complex(s1, t0), complex(s1, t1), complex(s0, t1)]
    edges = [(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    pts = [_edge_points(a, b, h0) for a, b in edges]
    seg_edge = np.concatenate([np.full(len(p), i) for i, p in enumerate(pts)])
    z = np.concatenate(pts)
    v = _values(f, z)
    evals = len(z)
    depth = 0
    while True:
        # refine until consecutive values are close relative to their size
        while True:
            z_next = np.roll(z, -1)
            v_next = np.roll(v, -1)
            mins = np.minimum(np.abs(v), np.abs(v_next))
            bad = np.abs(v_next - v) > 0.5 * mins
            if not bad.any():
                break
            depth += 1
            if depth > max_depth:
                i = int(np.flatnonzero(bad)[0])
                raise _NearContour(int(seg_edge[i]))
            z, v, seg_edge, n_ev = _refine(f, z, v, seg_edge, bad)
            evals += n_ev
        # a local minimum of |f| whose distance-to-zero estimate |f| / |f'|
        # is below the local spacing cannot be told apart from a zero on the
        # edge (an even-order zero between two samples has no phase jump);
        # refine around it until the spacing drops below near_tol
        mod = np.abs(v)
        z_next, v_next = np.roll(z, -1), np.roll(v, -1)
        z_prev, v_prev = np.roll(z, 1), np.roll(v, 1)
        local_min = (mod <= np.abs(v_next)) & (mod <= np.abs(v_prev))
        spacing = np.maximum(np.abs(z_next - z), np.abs(z - z_prev))
        # larger one-sided slope: a central difference cancels across an even-order zero
        deriv = np.maximum(
            np.abs(v_next - v) / np.maximum(np.abs(z_next - z), 1e-300),
            np.abs(v - v_prev) / np.maximum(np.abs(z - z_prev), 1e-300),
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            dist = np.where(deriv > 0, mod / deriv, np.where(mod == 0, 0.0, np.inf))
        suspect = local_min & (dist < np.maximum(near_tol, spacing))
        if not suspect.any():
            break
        close = suspect & (spacing <= near_tol)
        if close.any():
            raise _NearContour(int(seg_edge[int(np.flatnonzero(close)[0])]))
        depth += 1
        if depth > 2 * max_depth:
            raise _NearContour(int(seg_edge[int(np.flatnonzero(suspect)[0])]))
        # split the segments on both sides of each suspect minimum
        seg = suspect | np.roll(suspect, -1)
        z, v, seg_edge, n_ev = _refine(f, z, v, seg_edge, seg)
        evals += n_ev
    mod = np.abs(v)
    dphi = np.angle(np.roll(v, -1) / v)
    return float(dphi.sum() / (2 * math.pi)), float(mod.min()), evals


def _nudge(rect, edge: int, amount: float, pole: complex | None, window_max: float = SIGMA_MAX):
    s0, s1, t0, t1 = rect
    # edges: 0 bottom (t0), 1 right (s1), 2 top (t1), 3 left (s0); move outward
    if edge == 0:
        t0 -= amount
    elif edge == 1:
        s1 = s1 + amount if s1 + amount <= window_max else s1 - amount
    elif edge == 2:
        t1 += amount
    else:
        s0 -= amount
    return (s0, s1, t0, t1)


def _clear_pole(rect, pole: complex | None, amount: float):
    """Move an edge that passes within ``amount`` of the pole so the pole ends outside."""
    if pole is None:
        return rect, 0
    s0, s1, t0, t1 = rect
    p = complex(pole)
    moved = 0
    if s0 - amount <= p.real <= s1 + amount:
        if abs(p.imag - t0) < amount:
            t0, moved = p.imag + amount, moved + 1
        elif abs(p.imag - t1) < amount:
            t1, moved = p.imag - amount, moved + 1
    if t0 - amount <= p.imag <= t1 + amount:
        if abs(p.real - s0) < amount:
            s0, moved = p.real + amount, moved + 1
        elif abs(p.real - s1) < amount:
            s1, moved = p.real - amount, moved + 1
    return (s0, s1, t0, t1), moved


def _inside(p: complex | None, rect) -> bool:
    if p is None:
        return False
    s0, s1, t0, t1 = rect
    return s0 < p.real < s1 and t0 < p.imag < t1


def count_zeros(
    f,
    rectangle,
    h0: float = H0,
    max_depth: int = MAX_DEPTH,
    near_tol: float = NEAR_TOL,
    nudge: float | None = NUDGE,
) -> ZeroCountResult:
    """Number of zeros of ``f`` in ``(s0, s1) x (t0, t1)``, with multiplicity.

    ``f`` may carry ``pole`` and ``pole_order`` attributes; a pole inside
    the rectangle is added back as ``pole_correction``.  ``nudge=None``
    disables contour nudging and raises ``ContourError`` instead.
    """
    s0, s1, t0, t1 = (float(x) for x in rectangle)
    if s0 > s1 or t0 > t1:
        raise ValueError(f"malformed rectangle {rectangle}")
    requested = (s0, s1, t0, t1)
    if s0 == s1 or t0 == t1:
        return ZeroCountResult(requested, 0, 0, math.inf, 0.0, requested)
    pole, order = _pole_of(f)
    rect, nudges = _clear_pole(requested, pole, nudge or NUDGE)
    if nudges and nudge is None:
        raise ContourError(f"pole {pole} on the contour of {requested}")
    evals = 0
    while True:
        try:
            raw, min_mod, n_ev = _winding(f, rect, h0, max_depth, near_tol)
            evals += n_ev
            break
        except _NearContour as exc:
            if nudge is None or nudges >= MAX_NUDGES:
                raise ContourError(f"zero on or near the contour of {rect} (edge {exc.edge})") from None
            rect = _nudge(rect, exc.edge, nudge, pole)
            nudges += 1
    winding = round(raw)
    if abs(raw - winding) > INTEGER_TOL:
        raise ContourError(f"winding number {raw} is not close to an integer")
    correction = order if _inside(pole, rect) else 0
    count = int(winding) + correction
    if count < 0:
        raise ContourError(f"negative zero count {count} for {rect}")
    return ZeroCountResult(rect, count, correction, min_mod, raw, requested, nudges, evals)


def _derivative(f, s: complex, h: float = 1e-6) -> complex:
    v = _values(f, np.array([s + h, s - h, s + 1j * h, s - 1j * h]))
    return complex((v[0] - v[1]) / (2 * h) + (v[2] - v[3]) / (2j * h)) / 2


@dataclass(frozen=True)
class LocatedZero:
    s: complex
    multiplicity: int
    box: tuple[float, float, float, float]


def _split_count(f, rect, h0):
    # small boxes: a zero a few percent of the box size from an edge is fine
    near = min(NEAR_TOL, 0.02 * min(rect[1] - rect[0], rect[3] - rect[2]))
    try:
        return count_zeros(f, rect, h0=h0, near_tol=near, nudge=None).count
    except ContourError:
        return None


def locate_zeros(f, rectangle, tol: float = 1e-4, h0: float = H0) -> list[LocatedZero]:
    """Zeros of ``f`` in the rectangle: bisection down to ``tol`` boxes, then one Newton step."""
    top = count_zeros(f, rectangle, h0=h0)
    out: list[LocatedZero] = []
    stack = [(top.rectangle, top.count)]
    while stack:
        rect, n = stack.pop()
        if n == 0:
            continue
        s0, s1, t0, t1 = rect
        if max(s1 - s0, t1 - t0) <= tol:
            c = complex((s0 + s1) / 2, (t0 + t1) / 2)
            val = complex(_values(f, np.array([c]))[0])
            d = _derivative(f, c)
            s = c - val / d if d != 0 else c
            if abs(s - c) > tol:
                s = c
            out.append(LocatedZero(s, n, rect))
            continue
        vertical = (s1 - s0) >= (t1 - t0)
        h = min(h0, max(s1 - s0, t1 - t0) / 8)
        for frac in (0.5, 0.37, 0.63, 0.29, 0.71, 0.45, 0.55):
            if vertical:
                m = s0 + frac * (s1 - s0)
                a, b = (s0, m, t0, t1), (m, s1, t0, t1)
            else:
                m = t0 + frac * (t1 - t0)
                a, b = (s0, s1, t0, m), (s0, s1, m, t1)
            na, nb = _split_count(f, a, h), _split_count(f, b, h)
            if na is not None and nb is not None and na + nb == n:
                stack.append((b, nb))
                stack.append((a, na))
                break
        else:
            raise ContourError(f"could not split {rect} cleanly")
    out.sort(key=lambda z: (z.s.imag, z.s.real))
    return out


@dataclass(frozen=True)
class ZeroSetReport:
    matched: tuple[tuple[complex, complex, int], ...]
    unmatched_F: tuple[LocatedZero, ...]
    unmatched_f: tuple[LocatedZero, ...]
    region: tuple[float, float, float, float]

    @property
    def all_matched(self) -> bool:
        return not self.unmatched_F and not self.unmatched_f


def zero_set_compare(F, f, region, tol: float = 1e-4) -> ZeroSetReport:
    """Locate zeros of both functions in ``region`` and pair them within ``tol``."""
    zF = locate_zeros(F, region, tol)
    zf = locate_zeros(f, region, tol)
    left = list(zf)
    matched, unmatched_F = [], []
    for z in zF:
        best = None
        for j, w in enumerate(left):
            if w.multiplicity == z.multiplicity and abs(w.s - z.s) <= tol:
                if best is None or abs(w.s - z.s) < abs(left[best].s - z.s):
                    best = j
        if best is None:
            unmatched_F.append(z)
        else:
            matched.append((z.s, left.pop(best).s, z.multiplicity))
    return ZeroSetReport(tuple(matched), tuple(unmatched_F), tuple(left), tuple(float(x) for x in region))


@dataclass(frozen=True)
class DensityRow:
    sigma: float
    count: int
    ratio: float
    trivial: bool = False


def density_probe(f, sigma_list, T: float, sigma_max: float = SIGMA_MAX) -> list[DensityRow]:
    """``N(sigma, T) / T`` for each sigma: zeros with real part > sigma and ``|gamma| <= T``."""
    rows = []
    for sigma in sigma_list:
        sigma = float(sigma)
        if sigma <= 0.5:
            raise ValueError(f"density_probe needs sigma > 1/2, got {sigma}")
        if sigma >= 1.0:
            # Euler product: no zeros with real part > 1
            rows.append(DensityRow(sigma, 0, 0.0, trivial=True))
            continue
        res = count_zeros(f, (sigma, sigma_max, -T, T))
        rows.append(DensityRow(sigma, res.count, res.count / T))
    return rows


def smooth_zero_count(T: float) -> float:
    """Main terms of the zeta zero count up to height ``T``."""
    return T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e)) + 7 / 8


__all__ = [
    "ContourError",
    "DensityRow",
    "LocatedZero",
    "ZeroCountResult",
    "ZeroSetReport",
    "count_zeros",
    "density_probe",
    "locate_zeros",
    "smooth_zero_count",
    "zero_set_compare",
]
