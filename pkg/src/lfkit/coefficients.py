"""Dirichlet-coefficient generators for the built-in L-functions and their lifts.

Every source answers ``coeff(n)`` and ``prefix(N)`` (a 1-based complex array);
multiplicative sources also answer ``prime_power(p, m)``, which is how Euler
factors, Dirichlet inverses of local factors and the splits are built.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from lfkit.arith import (
    dirichlet_inverse_array,
    factorize,
    iroot,
    is_prime,
    multiplicative_array,
    series_divide,
)
from lfkit.fe_core import GammaFactorData, eigenform_data, zeta_data

ROOT_TOL = 1e-12
TAU_CAP = 10**5


class CoefficientError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Dirichlet characters


def _gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


@dataclass(frozen=True)
class DirichletCharacter:
    """Character given by its value table ``values[a] = chi(a mod q)``."""

    modulus: int
    values: tuple[complex, ...]
    name: str = ""

    def __post_init__(self) -> None:
        q = int(self.modulus)
        vals = tuple(complex(v) for v in self.values)
        object.__setattr__(self, "modulus", q)
        object.__setattr__(self, "values", vals)
        if q < 1 or len(vals) != q:
            raise ValueError(f"character mod {q} needs {q} values, got {len(vals)}")
        if abs(vals[1 % q] - 1) > ROOT_TOL:
            raise ValueError("chi(1) must be 1")
        units = [a for a in range(q) if _gcd(a, q) == 1]
        for a in range(q):
            if _gcd(a, q) != 1 and vals[a] != 0:
                raise ValueError(f"chi({a}) must vanish since gcd({a}, {q}) > 1")
        order = len(units)
        for a in units:
            v = vals[a]
            if abs(abs(v) - 1) > ROOT_TOL or abs(v**order - 1) > 1e-9:
                raise ValueError(f"chi({a}) = {v} is not a root of unity")
        for a in units:
            for b in units:
                if abs(vals[a * b % q] - vals[a] * vals[b]) > 1e-9:
                    raise ValueError(f"table is not multiplicative at ({a}, {b})")

    def __call__(self, n: int) -> complex:
        return self.values[n % self.modulus]

    @property
    def parity(self) -> str:
        if self.modulus <= 2:
            return "even"
        return "even" if abs(self(-1) - 1) < 1e-9 else "odd"

    @property
    def kappa(self) -> int:
        return 0 if self.parity == "even" else 1

    @property
    def is_principal(self) -> bool:
        q = self.modulus
        return all(abs(self.values[a] - 1) < 1e-9 for a in range(q) if _gcd(a, q) == 1)

    @property
    def primitive(self) -> bool:
        q = self.modulus
        for d in range(1, q):
            if q % d:
                continue
            # chi is induced from modulus d iff chi(a) = 1 for all units a = 1 mod d
            if all(abs(self(a) - 1) < 1e-9 for a in range(1, q) if a % d == 1 % d and _gcd(a, q) == 1):
                return False
        return True

    @property
    def is_real(self) -> bool:
        return all(abs(v.imag) < 1e-15 for v in self.values)

    def gauss_sum(self) -> complex:
        q = self.modulus
        return sum(self.values[a] * cmath.exp(2j * math.pi * a / q) for a in range(q))

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(v.conjugate() for v in self.values), self.name + "_bar")


def _round_root(v: complex) -> complex:
    # snap +-1, +-i so tables of exact characters stay exact
    for r in (1, -1, 1j, -1j):
        if abs(v - r) < 1e-12:
            return complex(r)
    return v


def _character_from_generator(q: int, g: int, value: complex, name: str) -> DirichletCharacter:
    vals = [0j] * q
    x = 1
    for e in range(q):
        vals[x] = _round_root(value**e)
        x = x * g % q
        if x == 1:
            break
    return DirichletCharacter(q, tuple(vals), name)


BUILTIN_CHARACTERS: dict[str, DirichletCharacter] = {
    "chi3": _character_from_generator(3, 2, -1, "chi3"),
    "chi4": DirichletCharacter(4, (0, 1, 0, -1), "chi4"),
    "chi5_even": _character_from_generator(5, 2, -1, "chi5_even"),
    "chi5_odd": _character_from_generator(5, 2, 1j, "chi5_odd"),
    "chi5_odd_bar": _character_from_generator(5, 2, -1j, "chi5_odd_bar"),
}


def character(name: str) -> DirichletCharacter:
    try:
        return BUILTIN_CHARACTERS[name]
    except KeyError:
        raise KeyError(f"unknown character {name!r}; built-ins: {sorted(BUILTIN_CHARACTERS)}") from None


def dirichlet_data(chi: DirichletCharacter) -> GammaFactorData:
    """Functional-equation data of ``L(s, chi)`` for primitive nonprincipal ``chi``."""
    if chi.is_principal:
        if chi.modulus == 1:
            return zeta_data()
        raise ValueError("principal characters mod q > 1 have no functional equation of this shape")
    if not chi.primitive:
        raise ValueError(f"character {chi.name or chi.values} is not primitive")
    q = chi.modulus
    kappa = chi.kappa
    omega = _round_root(chi.gauss_sum() / ((1j) ** kappa * math.sqrt(q)))
    omega /= abs(omega)
    return GammaFactorData(math.sqrt(q / math.pi), (0.5,), (kappa / 2,), omega, 0)


# ---------------------------------------------------------------------------
# Ramanujan tau


def tau_table(N: int) -> list[int]:
    """``tau(0..N)`` from ``q prod (1 - q^n)^24`` in exact integers.

    Uses ``prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2)`` and multiplies
    that sparse cube out eight times.
    """
    if N < 1:
        return [0] * (N + 1)
    M = N - 1
    cube = []
    k = 0
    while k * (k + 1) // 2 <= M:
        cube.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    cur = np.zeros(M + 1, dtype=object)
    cur[:] = 0
    for e, c in cube:
        cur[e] = c
    for _ in range(7):
        nxt = np.zeros(M + 1, dtype=object)
        nxt[:] = 0
        for e, c in cube:
            nxt[e:] += c * cur[: M + 1 - e]
        cur = nxt
    return [0] + [int(x) for x in cur]


# ---------------------------------------------------------------------------
# sources


class CoefficientSource:
    """Base class: a deterministic generator of Dirichlet coefficients."""

    kind = "abstract"
    multiplicative = False
    #: a(1) == 1 and the values are Gaussian integers (convolutions are exact)
    exact = False
    #: a(m) grows like m^growth_exponent along its support (lifts only)
    growth_exponent = 0.0

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._cache: np.ndarray | None = None

    def coeff(self, n: int) -> complex:
        if n < 1:
            raise CoefficientError(f"coefficients are indexed from 1, got {n}")
        return self._coeff(int(n))

    def _coeff(self, n: int) -> complex:
        if self.multiplicative:
            out = 1 + 0j
            for p, e in factorize(n).items():
                out *= self.prime_power(p, e)
            return out
        return complex(self.prefix(n)[n])

    def prefix(self, N: int) -> np.ndarray:
        """Read-only array ``a`` with ``a[n]`` the n-th coefficient, ``n <= N``."""
        N = int(N)
        if N < 1:
            raise CoefficientError(f"prefix length must be >= 1, got {N}")
        cache = self._cache
        if cache is None or len(cache) <= N:
            with self._lock:
                cache = self._cache
                if cache is None or len(cache) <= N:
                    size = N if cache is None else max(N, 2 * (len(cache) - 1))
                    arr = np.asarray(self._build(size), dtype=np.complex128)
                    arr.setflags(write=False)
                    self._cache = cache = arr
        return cache[: N + 1]

    def _build(self, N: int) -> np.ndarray:
        if self.multiplicative:
            return multiplicative_array(self.prime_power, N)
        raise NotImplementedError

    def prime_power(self, p: int, m: int) -> complex:
        raise CoefficientError(f"{self.kind} source is not multiplicative")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"

    def describe(self) -> str:
        return self.kind


class Zeta(CoefficientSource):
    kind = "zeta"
    multiplicative = True
    exact = True

    def _coeff(self, n: int) -> complex:
        return 1 + 0j

    def _build(self, N: int) -> np.ndarray:
        a = np.ones(N + 1, dtype=np.complex128)
        a[0] = 0
        return a

    def prime_power(self, p: int, m: int) -> complex:
        return 1 + 0j


class DirichletL(CoefficientSource):
    kind = "dirichlet"
    multiplicative = True

    def __init__(self, chi: DirichletCharacter) -> None:
        super().__init__()
        self.chi = chi
        self.exact = all(v.real == int(v.real) and v.imag == int(v.imag) for v in chi.values)

    def _coeff(self, n: int) -> complex:
        return self.chi(n)

    def _build(self, N: int) -> np.ndarray:
        table = np.asarray(self.chi.values, dtype=np.complex128)
        a = table[np.arange(N + 1) % self.chi.modulus]
        a[0] = 0
        return a

    def prime_power(self, p: int, m: int) -> complex:
        return self.chi(p) ** m if m else 1 + 0j

    def describe(self) -> str:
        return self.chi.name or f"chi mod {self.chi.modulus}"


class Eigenform(CoefficientSource):
    """Normalized coefficients ``tau(n) / n^(11/2)`` of the weight-12 level-1 form."""

    kind = "eigenform"
    multiplicative = True
    weight = 12

    def __init__(self) -> None:
        super().__init__()
        self._tau: list[int] = [0, 1]
        self._tau_lock = threading.Lock()

    def tau(self, n: int) -> int:
        if n < 1:
            raise CoefficientError(f"tau is indexed from 1, got {n}")
        if n >= len(self._tau):
            if n > TAU_CAP:
                raise CoefficientError(f"tau({n}) exceeds the table cap {TAU_CAP}")
            with self._tau_lock:
                if n >= len(self._tau):
                    size = min(TAU_CAP, max(n, 2 * len(self._tau), 1024))
                    self._tau = tau_table(size)
        return self._tau[n]

    def tau_prime_power(self, p: int, m: int) -> int:
        """Hecke recursion ``tau(p^(m+1)) = tau(p) tau(p^m) - p^11 tau(p^(m-1))``."""
        if m == 0:
            return 1
        tp = self.tau(p)
        prev, cur = 1, tp
        for _ in range(m - 1):
            prev, cur = cur, tp * cur - p**11 * prev
        return cur

    def _coeff(self, n: int) -> complex:
        return complex(self.tau(n) / n**5.5)

    def _build(self, N: int) -> np.ndarray:
        self.tau(N)
        tau = self._tau
        n = np.arange(N + 1, dtype=np.float64)
        a = np.array([float(t) for t in tau[: N + 1]], dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = a / n**5.5
        out[0] = 0
        return out.astype(np.complex128)

    def prime_power(self, p: int, m: int) -> complex:
        return complex(self.tau_prime_power(p, m) / float(p) ** (5.5 * m))


class Explicit(CoefficientSource):
    """A finite list ``a(1), ..., a(L)``.

    With ``polynomial=True`` the list is a Dirichlet polynomial and every
    index past ``L`` reads as 0; otherwise such indices are an error.
    """

    kind = "explicit"

    def __init__(self, values: Sequence[complex], multiplicative: bool = False, polynomial: bool = False):
        super().__init__()
        vals = np.zeros(len(values) + 1, dtype=np.complex128)
        vals[1:] = np.asarray(values, dtype=np.complex128)
        vals.setflags(write=False)
        self.values = vals
        self.multiplicative = bool(multiplicative)
        self.polynomial = bool(polynomial)
        self.exact = bool(
            len(values)
            and np.all(vals.real == np.round(vals.real))
            and np.all(vals.imag == np.round(vals.imag))
        )

    @property
    def length(self) -> int:
        return len(self.values) - 1

    def _check(self, n: int) -> None:
        if n > self.length and not self.polynomial:
            raise CoefficientError(f"explicit source has {self.length} coefficients, asked for n={n}")

    def _coeff(self, n: int) -> complex:
        self._check(n)
        return complex(self.values[n]) if n <= self.length else 0j

    def prefix(self, N: int) -> np.ndarray:
        if N < 1:
            raise CoefficientError(f"prefix length must be >= 1, got {N}")
        self._check(N)
        if N <= self.length:
            return self.values[: N + 1]
        out = np.zeros(N + 1, dtype=np.complex128)
        out[: self.length + 1] = self.values
        return out

    def prime_power(self, p: int, m: int) -> complex:
        if not self.multiplicative:
            raise CoefficientError("explicit source is not marked multiplicative")
        return self._coeff(p**m)

    def describe(self) -> str:
        return f"{self.length} values"


class Lift(CoefficientSource):
    """Coefficients of ``F(k s + (1 - k)/2)``: ``a(n) n^((k-1)/2)`` at ``m = n^k``, else 0."""

    kind = "lift"

    def __init__(self, base: CoefficientSource, k: int) -> None:
        super().__init__()
        if int(k) != k or k < 1:
            raise ValueError(f"lift order must be a positive integer, got {k}")
        if isinstance(base, Lift):
            base, k = base.base, base.k * int(k)
        self.base = base
        self.k = int(k)
        self.multiplicative = base.multiplicative
        self.exact = base.exact and self.k == 1
        self.growth_exponent = base.growth_exponent / self.k + (self.k - 1) / (2 * self.k)

    def _coeff(self, n: int) -> complex:
        r = iroot(n, self.k)
        if r**self.k != n:
            return 0j
        return self.base.coeff(r) * r ** ((self.k - 1) / 2)

    def _build(self, N: int) -> np.ndarray:
        out = np.zeros(N + 1, dtype=np.complex128)
        R = iroot(N, self.k)
        base = self.base.prefix(R)
        r = np.arange(1, R + 1)
        out[r**self.k] = base[1:] * r.astype(np.float64) ** ((self.k - 1) / 2)
        return out

    def prime_power(self, p: int, m: int) -> complex:
        if m % self.k:
            return 0j
        j = m // self.k
        return self.base.prime_power(p, j) * float(p) ** (j * (self.k - 1) / 2)

    def describe(self) -> str:
        return f"{self.base.describe()}, k={self.k}"


class Ratio(CoefficientSource):
    """Coefficients ``h`` of ``F(s)/G(s)`` for multiplicative ``F`` and ``G``."""

    kind = "ratio"
    multiplicative = True

    def __init__(self, F: CoefficientSource, G: CoefficientSource) -> None:
        super().__init__()
        for src in (F, G):
            if not src.multiplicative:
                raise CoefficientError(f"{src.kind} source is not multiplicative")
        self.F, self.G = F, G
        self.exact = F.exact and G.exact
        self._pp: dict[int, list[complex]] = {}
        self._pp_lock = threading.Lock()

    def prime_power(self, p: int, m: int) -> complex:
        series = self._pp.get(p)
        if series is None or len(series) <= m:
            M = max(m, 8, 2 * (len(series) if series else 0))
            num = [self.F.prime_power(p, j) for j in range(M + 1)]
            den = [self.G.prime_power(p, j) for j in range(M + 1)]
            series = [complex(x) for x in series_divide(num, den, M)]
            with self._pp_lock:
                self._pp[p] = series
        return series[m]

    def describe(self) -> str:
        return f"{self.F.describe()} / {self.G.describe()}"


# ---------------------------------------------------------------------------
# operations


def coeff(source: CoefficientSource, n: int) -> complex:
    return source.coeff(n)


def lift_coeff(base: CoefficientSource, k: int, m: int) -> complex:
    return Lift(base, k).coeff(m)


def euler_factor(source: CoefficientSource, p: int, M: int) -> list[complex]:
    """Truncated local factor ``(a(1), a(p), ..., a(p^M))``."""
    if not source.multiplicative:
        raise CoefficientError(f"{source.kind} source is not multiplicative; no Euler factor")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return [1 + 0j] + [source.prime_power(p, m) for m in range(1, M + 1)]


def dirichlet_inverse(source: CoefficientSource | np.ndarray, N: int) -> np.ndarray:
    a = source if isinstance(source, np.ndarray) else source.prefix(N)
    return dirichlet_inverse_array(np.asarray(a[: N + 1], dtype=np.complex128))


@dataclass(frozen=True)
class RamanujanReport:
    N: int
    eps: float
    max_ratio: float
    argmax: int
    growth_flag: bool
    growth_exponent: float
    fitted_exponent: float
    block_maxima: tuple[tuple[int, float], ...]


def _perfect_power_mask(N: int) -> np.ndarray:
    mask = np.zeros(N + 1, dtype=bool)
    for j in range(2, max(2, N.bit_length()) + 1):
        R = iroot(N, j)
        if R < 2:
            break
        mask[np.arange(2, R + 1) ** j] = True
    return mask


def ramanujan_audit(source: CoefficientSource, N: int, eps: float) -> RamanujanReport:
    """Scan ``|a(n)| / n^eps`` for ``n <= N`` and test growth along perfect powers.

    The growth flag is set when the maxima of ``|a(m)|`` over perfect powers
    ``m`` in successive dyadic blocks increase strictly over the last four
    nonempty blocks (at least four are required).
    """
    if N < 2 or eps <= 0:
        raise ValueError("ramanujan_audit needs N >= 2 and eps > 0")
    a = np.abs(source.prefix(N))
    n = np.arange(N + 1, dtype=np.float64)
    ratio = np.zeros(N + 1)
    ratio[1:] = a[1:] / n[1:] ** eps
    arg = int(np.argmax(ratio))
    mask = _perfect_power_mask(N) & (a > 0)
    blocks = []
    lo = 2
    while lo <= N:
        hi = min(2 * lo, N + 1)
        sel = mask[lo:hi]
        if sel.any():
            idx = np.flatnonzero(sel) + lo
            blocks.append((lo, float(a[idx].max())))
        lo *= 2
    tail = [v for _, v in blocks[-4:]]
    flag = len(tail) == 4 and all(y > x * (1 + 1e-12) for x, y in zip(tail, tail[1:]))
    fitted = 0.0
    if len(blocks) >= 3:
        xs = np.log([b for b, _ in blocks[-6:]])
        ys = np.log([max(v, 1e-300) for _, v in blocks[-6:]])
        fitted = float(np.polyfit(xs, ys, 1)[0])
    return RamanujanReport(
        N=N,
        eps=eps,
        max_ratio=float(ratio[arg]),
        argmax=arg,
        growth_flag=flag,
        growth_exponent=source.growth_exponent,
        fitted_exponent=fitted,
        block_maxima=tuple(blocks),
    )


# ---------------------------------------------------------------------------
# builtins


def builtin_source(name: str) -> CoefficientSource:
    if name == "zeta":
        return Zeta()
    if name == "eigenform":
        return Eigenform()
    if name in BUILTIN_CHARACTERS:
        return DirichletL(BUILTIN_CHARACTERS[name])
    raise KeyError(f"unknown built-in source {name!r}")


def builtin_data(name: str) -> GammaFactorData:
    if name == "zeta":
        return zeta_data()
    if name == "eigenform":
        return eigenform_data(12)
    return dirichlet_data(character(name))


def load_explicit(path, multiplicative: bool = False, polynomial: bool = False) -> Explicit:
    """Read one coefficient per line, ``re`` or ``re im``; blank lines and ``#`` comments skipped."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            try:
                if len(parts) == 1:
                    values.append(complex(float(parts[0]), 0.0))
                elif len(parts) == 2:
                    values.append(complex(float(parts[0]), float(parts[1])))
                else:
                    raise ValueError
            except ValueError:
                raise CoefficientError(f"{path}:{lineno}: expected 're' or 're im', got {text!r}") from None
    return Explicit(values, multiplicative=multiplicative, polynomial=polynomial)
