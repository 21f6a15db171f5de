"""Complex Gamma function: Lanczos approximation with reflection.

Uses the ``g = 607/128``, 15-term coefficient set, which gives close to
double-precision relative accuracy for ``Re s >= 1/2``; the left half-plane
is reached through ``Gamma(s) Gamma(1 - s) = pi / sin(pi s)``, evaluated in
log space so that large imaginary parts neither overflow nor cancel.
"""

from __future__ import annotations

import numpy as np

_G = 607 / 128
_COEF = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_HALF_LOG_2PI = 0.5 * np.log(2 * np.pi)
POLE_TOL = 1e-14


class GammaPoleError(ValueError):
    """Argument at (or numerically on) a nonpositive integer."""


def _lanczos_loggamma(s: np.ndarray) -> np.ndarray:
    # valid for Re s >= 1/2
    z = s - 1
    acc = np.full(z.shape, _COEF[0], dtype=np.complex128)
    for k in range(1, len(_COEF)):
        acc += _COEF[k] / (z + k)
    w = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(w) - w + np.log(acc)


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """``log sin(pi z)`` (some branch), stable for large ``|Im z|``."""
    out = np.empty(z.shape, dtype=np.complex128)
    up = z.imag >= 0
    zu = z[up]
    # sin(pi z) = e^(-i pi z) (e^(2 pi i z) - 1) / (2i) for Im z >= 0
    out[up] = -1j * np.pi * zu + np.log(np.exp(2j * np.pi * zu) - 1) - np.log(2j)
    zd = z[~up]
    out[~up] = 1j * np.pi * zd + np.log(1 - np.exp(-2j * np.pi * zd)) - np.log(2j)
    return out


def _check_poles(s: np.ndarray) -> None:
    r = np.rint(s.real)
    bad = (np.abs(s - r) < POLE_TOL) & (r <= 0)
    if bad.any():
        raise GammaPoleError(f"Gamma has a pole at s = {complex(s[bad][0])}")


def complex_loggamma(s):
    """A logarithm of ``Gamma(s)``; the imaginary part is correct modulo ``2 pi``."""
    arr = np.asarray(s, dtype=np.complex128)
    flat = np.atleast_1d(arr).ravel()
    _check_poles(flat)
    out = np.empty(flat.shape, dtype=np.complex128)
    right = flat.real >= 0.5
    out[right] = _lanczos_loggamma(flat[right])
    left = ~right
    if left.any():
        z = flat[left]
        out[left] = np.log(np.pi) - _log_sin_pi(z) - _lanczos_loggamma(1 - z)
    return out.reshape(arr.shape) if arr.ndim else complex(out[0])


def complex_gamma(s):
    """``Gamma(s)`` for complex ``s``; scalar in, scalar out, arrays elementwise."""
    lg = complex_loggamma(s)
    return np.exp(lg) if isinstance(lg, np.ndarray) else complex(np.exp(lg))
