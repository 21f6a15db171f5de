"""Analytic continuation of the built-in L-functions inside a fixed window.

* zeta and Dirichlet L-functions: Euler-Maclaurin summation on the Hurwitz
  decomposition ``L(s, chi) = sum_a chi(a) sum_m (q m + a)^(-s)``, vectorized
  over arrays of ``s``, with the Rademacher remainder bound as error estimate;
* the weight-12 eigenform: the Mellin split of the completed function at a
  point ``y0`` of modulus 1.1, rotated towards the imaginary axis as ``|t|``
  grows so that the e^(-pi |t| / 2) decay of the Gamma factor is not
  obtained by cancellation;
* lifts ``F_k(s) = F(k s + (1 - k)/2)`` through the base evaluator.

Evaluation outside ``-1 <= Re s <= 3``, ``|Im s| <= 100`` (for lifts: of the
mapped point) raises ``WindowError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from lfkit.analytic.gamma import complex_loggamma
from lfkit.coefficients import (
    BUILTIN_CHARACTERS,
    CoefficientSource,
    DirichletCharacter,
    DirichletL,
    Eigenform,
    Lift,
    Zeta,
    dirichlet_data,
)
from lfkit.fe_core import GammaFactorData, eigenform_data, lift_data, zeta_data

SIGMA_MIN, SIGMA_MAX = -1.0, 3.0
T_MAX = 100.0
POLE_EXCLUSION = 1e-6
EM_TERMS = 20
EIGEN_Y0 = 1.1
# rotate the Mellin ray once |t| exceeds this; exp(EIGEN_MARGIN) is the
# cancellation tolerated in double precision
EIGEN_MARGIN = 6.0
EIGEN_REL = 1e-12
_EPS = np.finfo(float).eps


class WindowError(ValueError):
    """Point outside the evaluation window."""


class PoleError(ValueError):
    """Point too close to a pole."""


@dataclass(frozen=True)
class EvaluablePoint:
    s: complex
    value: complex
    est_abs_error: float


@lru_cache(maxsize=None)
def _bernoulli_factorial(K: int) -> np.ndarray:
    """``B_{2j} / (2j)!`` for ``j = 1..K+1``."""
    return np.array([float(mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j)) for j in range(1, K + 2)])


def _phi(z: np.ndarray) -> np.ndarray:
    """``(e^z - 1) / z`` with the removable singularity filled in."""
    out = np.empty_like(z)
    small = np.abs(z) < 1e-5
    zs = z[small]
    out[small] = 1 + zs / 2 + zs * zs / 6
    zl = z[~small]
    out[~small] = (np.exp(zl) - 1) / zl
    return out


def hurwitz_sum(s, q: int, shifts, weights, K: int = EM_TERMS) -> tuple[np.ndarray, np.ndarray]:
    """``sum_j w_j sum_{m >= 0} (q m + a_j)^(-s)`` with an error estimate.

    When the weights sum to zero the pole at ``s = 1`` cancels and the
    ``x^(1-s) / (s - 1)`` terms are combined through ``expm1``-style
    evaluation, so ``s = 1`` itself is fine.
    """
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    a = np.asarray(shifts, dtype=np.float64)
    w = np.asarray(weights, dtype=np.complex128)
    M0 = max(12, int(math.ceil(np.max(np.abs(s)) / math.pi)) + 10)
    ns = (q * np.arange(M0, dtype=np.float64)[:, None] + a[None, :]).ravel()
    ws = np.tile(w, M0)
    direct = np.exp(-s[:, None] * np.log(ns)[None, :])
    value = direct @ ws
    scale = np.abs(direct) @ np.abs(ws)

    x0 = q * M0 + a
    L0 = np.log(x0)
    xs = np.exp(-s[:, None] * L0[None, :])  # x0^(-s)
    if abs(w.sum()) < 1e-12:
        z = (1 - s)[:, None] * L0[None, :]
        pole = (-L0[None, :] * _phi(z)) @ w / q
    else:
        pole = (xs * x0[None, :]) @ w / (q * (s - 1))
    value = value + pole + (xs @ w) / 2
    scale = scale + np.abs(pole) + (np.abs(xs) @ np.abs(w)) / 2

    bf = _bernoulli_factorial(K)
    P = s[:, None] * (q / x0)[None, :]
    last = None
    for j in range(1, K + 2):
        term = bf[j - 1] * (P * xs) @ w
        if j == K + 1:
            last = np.abs(term)
            break
        value = value + term
        scale = scale + np.abs(term)
        P = P * ((s + 2 * j - 1) * (s + 2 * j))[:, None] * (q / x0)[None, :] ** 2
    sig = s.real
    remainder = last * np.abs(s + 2 * K + 1) / (sig + 2 * K + 1)
    # phases s log n carry absolute error ~ |s| log n * eps
    err = remainder + (16 + np.abs(s) * np.log(x0.max())) * _EPS * scale
    return value, err


def _as_array(s) -> tuple[np.ndarray, bool]:
    arr = np.asarray(s, dtype=np.complex128)
    return np.atleast_1d(arr).ravel(), arr.ndim == 0


def check_window(s, t_max: float = T_MAX) -> None:
    arr, _ = _as_array(s)
    bad = (arr.real < SIGMA_MIN - 1e-12) | (arr.real > SIGMA_MAX + 1e-12) | (np.abs(arr.imag) > t_max + 1e-12)
    if bad.any():
        raise WindowError(
            f"s = {complex(arr[bad][0])} outside the window {SIGMA_MIN} <= Re s <= {SIGMA_MAX}, |Im s| <= {t_max}"
        )


def _gamma_cf(a: complex, z: np.ndarray, tol: float = 1e-15, maxit: int = 5000) -> np.ndarray:
    """Legendre continued fraction for ``Gamma(a, z)`` (modified Lentz), vectorized over ``z``."""
    tiny = 1e-300
    b = z + 1 - a
    c = np.full(z.shape, 1 / tiny, dtype=np.complex128)
    d = 1 / b
    h = d.copy()
    done = np.zeros(z.shape, dtype=bool)
    for i in range(1, maxit):
        an = -i * (i - a)
        b = b + 2
        d = an * d + b
        d[np.abs(d) < tiny] = tiny
        c = b + an / c
        c[np.abs(c) < tiny] = tiny
        d = 1 / d
        delta = d * c
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1) < tol
        if done.all():
            break
    else:
        raise RuntimeError(f"incomplete gamma continued fraction did not converge for a = {a}")
    return np.exp(-z + a * np.log(z)) * h


def upper_gamma(a: complex, z) -> np.ndarray:
    """``Gamma(a, z)`` for ``Re z > 0`` in double precision.

    The continued fraction is used where ``|z| > |a|`` and mpmath's
    double-precision routine elsewhere; each is reliable in its region and
    not in the other's.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    a = complex(a)
    out = np.empty(z.shape, dtype=np.complex128)
    big = np.abs(z) > abs(a)
    if big.any():
        out[big] = _gamma_cf(a, z[big])
    for i in np.flatnonzero(~big):
        out[i] = complex(mpmath.fp.gammainc(a, complex(z[i])))
    return out


class LFunction:
    """A built-in L-function with its functional-equation data.

    Instances are callable on scalars or arrays of ``s`` and return values;
    ``values`` also returns the error estimates.  ``t_max`` is the height
    of the evaluation window; the default is the documented window, larger
    values must be asked for explicitly.
    """

    name = "L"
    data: GammaFactorData
    t_max: float = T_MAX

    @property
    def pole_order(self) -> int:
        return self.data.pole_order

    @property
    def pole(self) -> complex | None:
        return 1.0 + 0j if self.pole_order else None

    def _values(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def _check(self, s: np.ndarray) -> None:
        check_window(s, self.t_max)
        p = self.pole
        if p is not None and np.any(np.abs(s - p) < POLE_EXCLUSION):
            raise PoleError(f"{self.name}: s within {POLE_EXCLUSION} of the pole at {p}")

    def values(self, s) -> tuple[np.ndarray, np.ndarray]:
        arr, scalar = _as_array(s)
        self._check(arr)
        v, e = self._values(arr)
        if scalar:
            return v[0], e[0]
        return v.reshape(np.shape(s)), e.reshape(np.shape(s))

    def __call__(self, s):
        v, _ = self.values(s)
        return complex(v) if np.ndim(v) == 0 else v

    def evaluate(self, s) -> EvaluablePoint:
        v, e = self.values(complex(s))
        return EvaluablePoint(complex(s), complex(v), float(e))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class ZetaFunction(LFunction):
    name = "zeta"

    def __init__(self, t_max: float = T_MAX) -> None:
        self.data = zeta_data()
        self.t_max = float(t_max)

    def _values(self, s):
        return hurwitz_sum(s, 1, [1.0], [1.0])


class DirichletLFunction(LFunction):
    def __init__(self, chi: DirichletCharacter, t_max: float = T_MAX) -> None:
        self.t_max = float(t_max)
        if chi.is_principal:
            raise ValueError("use ZetaFunction for the trivial character")
        self.chi = chi
        self.name = f"L({chi.name or 'chi'})"
        self.data = dirichlet_data(chi)
        q = chi.modulus
        self._shifts = [a for a in range(1, q + 1) if chi.values[a % q] != 0]
        self._weights = [chi.values[a % q] for a in self._shifts]

    def _values(self, s):
        return hurwitz_sum(s, self.chi.modulus, self._shifts, self._weights)


class EigenformFunction(LFunction):
    """Normalized L-function of the weight-12 level-1 eigenform."""

    name = "eigenform"
    weight = 12

    def __init__(self, source: Eigenform | None = None, t_max: float = T_MAX) -> None:
        self.t_max = float(t_max)
        self.source = source or Eigenform()
        self.data = eigenform_data(self.weight)

    def _terms(self, phi: float) -> int:
        """Number of terms so the tail is below 1e-17 of the largest term."""
        c = 2 * math.pi * math.cos(phi) / EIGEN_Y0
        peak = max(1.0, 4.5 / c)
        target = 4.5 * math.log(peak) - c * peak - 40.0
        N = int(peak) + 1
        while 4.5 * math.log(N) - c * N > target:
            N += 1
        return N

    def completed_unnormalized(self, w: complex) -> tuple[complex, float]:
        """``Lambda(w) = (2 pi)^(-w) Gamma(w) sum tau(n) n^(-w)`` and the summed term magnitude."""
        w = complex(w)
        t = w.imag
        if abs(t) * 2 / math.pi > EIGEN_MARGIN:
            phi = math.copysign(math.pi / 2 - EIGEN_MARGIN / abs(t), t)
        else:
            phi = 0.0
        y0 = EIGEN_Y0 * complex(math.cos(phi), math.sin(phi))
        N = self._terms(phi)
        n = np.arange(1, N + 1, dtype=np.float64)
        tau = np.array([float(self.source.tau(int(m))) for m in n])
        x = 2 * np.pi * n
        A = tau * upper_gamma(w, x * y0) * np.exp(-w * np.log(x))
        B = tau * upper_gamma(self.weight - w, x / y0) * np.exp((w - self.weight) * np.log(x))
        return complex(A.sum() + B.sum()), float(np.abs(A).sum() + np.abs(B).sum())

    def _values(self, s):
        out = np.empty(s.shape, dtype=np.complex128)
        err = np.empty(s.shape, dtype=np.float64)
        shift = (self.weight - 1) / 2
        for i, si in enumerate(s):
            w = complex(si) + shift
            lam, mag = self.completed_unnormalized(w)
            # F(s) = (2 pi)^w Lambda(w) / Gamma(w)
            factor = np.exp(w * math.log(2 * math.pi) - complex_loggamma(w))
            out[i] = factor * lam
            err[i] = abs(factor) * mag * EIGEN_REL
        return out, err


class LiftedFunction(LFunction):
    """``F_k(s) = F(k s + (1 - k)/2)``."""

    def __init__(self, base: LFunction, k: int) -> None:
        if int(k) != k or k < 1:
            raise ValueError(f"lift order must be a positive integer, got {k}")
        self.base = base
        self.k = int(k)
        self.name = f"{base.name}_lift{self.k}"
        self.data = lift_data(base.data, self.k)

    @property
    def pole(self) -> complex | None:
        p = self.base.pole
        return None if p is None else (p - (1 - self.k) / 2) / self.k

    def map(self, s):
        return self.k * np.asarray(s) + (1 - self.k) / 2

    def _check(self, s):
        self.base._check(self.map(s))

    def _values(self, s):
        return self.base._values(self.map(s))


class FunctionEvaluable:
    """Wrap a vectorized callable ``s -> values`` as an evaluable with a name."""

    def __init__(self, fn, name: str = "f", pole: complex | None = None, pole_order: int = 0) -> None:
        self.fn = fn
        self.name = name
        self.pole = pole
        self.pole_order = pole_order

    def __call__(self, s):
        out = self.fn(np.asarray(s, dtype=np.complex128))
        return complex(out) if np.ndim(out) == 0 else np.asarray(out, dtype=np.complex128)

    def __repr__(self) -> str:
        return f"<FunctionEvaluable {self.name}>"


def builtin_function(name: str, k: int = 1, t_max: float = T_MAX) -> LFunction:
    if name == "zeta":
        f: LFunction = ZetaFunction(t_max)
    elif name == "eigenform":
        f = EigenformFunction(t_max=t_max)
    elif name in BUILTIN_CHARACTERS:
        f = DirichletLFunction(BUILTIN_CHARACTERS[name], t_max)
    else:
        raise KeyError(f"unknown built-in {name!r}")
    return f if k == 1 else LiftedFunction(f, k)


def function_for_source(source: CoefficientSource) -> LFunction:
    """The evaluator matching a built-in coefficient source."""
    if isinstance(source, Zeta):
        return ZetaFunction()
    if isinstance(source, Eigenform):
        return EigenformFunction(source)
    if isinstance(source, DirichletL):
        return DirichletLFunction(source.chi)
    if isinstance(source, Lift):
        return LiftedFunction(function_for_source(source.base), source.k)
    raise TypeError(f"no analytic continuation available for {source!r}")


def evaluate(builtin: LFunction | str, s: complex) -> EvaluablePoint:
    f = builtin_function(builtin) if isinstance(builtin, str) else builtin
    return f.evaluate(s)


def completed(data: GammaFactorData, F, s):
    """``Q^s prod_j Gamma(lambda_j s + mu_j) F(s)``."""
    arr = np.asarray(s, dtype=np.complex128)
    log_g = arr * math.log(data.Q)
    for lam, mu in zip(data.lam, data.mu):
        log_g = log_g + complex_loggamma(lam * arr + mu)
    return np.exp(log_g) * np.asarray(F(arr))


def fe_residual(data: GammaFactorData, builtin: LFunction | str, s: complex, relative: bool = False) -> float:
    """``|Lambda(s) - omega conj(Lambda(1 - conj(s)))|``, optionally divided by ``|Lambda(s)|``."""
    f = builtin_function(builtin) if isinstance(builtin, str) else builtin
    s = complex(s)
    s2 = 1 - s.conjugate()
    left = complex(completed(data, f, s))
    right = data.omega * complex(completed(data, f, s2)).conjugate()
    r = abs(left - right)
    return r / abs(left) if relative else r


__all__ = [
    "DirichletLFunction",
    "EigenformFunction",
    "EvaluablePoint",
    "FunctionEvaluable",
    "LFunction",
    "LiftedFunction",
    "PoleError",
    "WindowError",
    "ZetaFunction",
    "builtin_function",
    "check_window",
    "completed",
    "evaluate",
    "fe_residual",
    "function_for_source",
    "hurwitz_sum",
    "upper_gamma",
]
