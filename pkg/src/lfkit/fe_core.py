"""Functional-equation data, Selberg invariants and the k-lift on data.

A datum ``(Q, lambda, mu, omega)`` describes the completed function

    Lambda(s) = Q^s prod_j Gamma(lambda_j s + mu_j) F(s),

with ``Lambda(s) = omega * conj(Lambda(1 - conj(s)))``.  The k-lift
``F_k(s) = F(k s + (1 - k)/2)`` acts on data by
``(Q, lambda, mu, omega) -> (Q^k, k lambda, mu + (1 - k)/2 lambda, omega)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class GammaFactorData:
    """Gamma-factor data of a functional equation of Riemann type.

    ``pole_order`` is the order ``m`` of the pole at ``s = 1``.  ``pole_moved``
    is set on lifts with ``k >= 2`` of data with a pole: the lifted function
    has its pole at ``s = (k + 1)/(2k)`` rather than ``s = 1``.
    """

    Q: float
    lam: tuple[float, ...]
    mu: tuple[complex, ...]
    omega: complex = 1.0 + 0.0j
    pole_order: int = 0
    pole_moved: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        lam = tuple(float(x) for x in self.lam)
        mu = tuple(complex(x) for x in self.mu)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "omega", complex(self.omega))
        object.__setattr__(self, "Q", float(self.Q))
        if not lam:
            raise ValueError("lambda must be nonempty")
        if len(lam) != len(mu):
            raise ValueError(f"lambda has {len(lam)} entries but mu has {len(mu)}")
        if not (self.Q > 0 and math.isfinite(self.Q)):
            raise ValueError(f"Q must be a positive real, got {self.Q}")
        for j, x in enumerate(lam):
            if not (x > 0 and math.isfinite(x)):
                raise ValueError(f"lambda[{j}] must be positive, got {x}")
        if abs(abs(self.omega) - 1.0) > UNIT_TOL:
            raise ValueError(f"|omega| must be 1 within {UNIT_TOL}, got {abs(self.omega)!r}")
        if int(self.pole_order) != self.pole_order or self.pole_order < 0:
            raise ValueError(f"pole_order must be a nonnegative integer, got {self.pole_order}")
        object.__setattr__(self, "pole_order", int(self.pole_order))

    @property
    def r(self) -> int:
        return len(self.lam)

    @property
    def sharp_admissible(self) -> bool:
        """True iff every Re(mu_j) >= 0, as required in the extended class."""
        return all(m.real >= 0 for m in self.mu)


@dataclass(frozen=True)
class SelbergInvariants:
    degree: float
    conductor: float
    b_invariant: float


def degree(data: GammaFactorData) -> float:
    return 2.0 * math.fsum(data.lam)


def conductor(data: GammaFactorData) -> float:
    """Conductor ``(2 pi)^d Q^2 prod_j lambda_j^(2 lambda_j)``.

    Computed in log space so lifts with large ``k`` stay finite.
    """
    d = degree(data)
    log_q = d * math.log(2 * math.pi) + 2 * math.log(data.Q)
    log_q += math.fsum(2 * x * math.log(x) for x in data.lam)
    return math.exp(log_q)


def b_invariant(data: GammaFactorData) -> float:
    return 2.0 * min(m.real / x for x, m in zip(data.lam, data.mu)) + 1.0


def invariants(data: GammaFactorData) -> SelbergInvariants:
    return SelbergInvariants(degree(data), conductor(data), b_invariant(data))


def lift_data(data: GammaFactorData, k: int) -> GammaFactorData:
    if int(k) != k or k < 1:
        raise ValueError(f"lift order must be a positive integer, got {k}")
    k = int(k)
    if k == 1:
        return data
    shift = (1 - k) / 2
    return GammaFactorData(
        Q=data.Q**k,
        lam=tuple(k * x for x in data.lam),
        mu=tuple(m + shift * x for x, m in zip(data.lam, data.mu)),
        omega=data.omega,
        pole_order=data.pole_order,
        pole_moved=data.pole_moved or data.pole_order > 0,
    )


def lift_admissible(data: GammaFactorData, entire: bool, k: int) -> bool:
    """Whether the k-lift stays inside the extended class.

    Requires ``k <= B_F`` and, for ``k >= 2``, holomorphy at ``s = 1``.
    """
    if k < 1:
        raise ValueError(f"lift order must be positive, got {k}")
    if k == 1:
        return True
    # B_F is a ratio of user floats; allow rounding at the boundary k == B_F
    return k <= b_invariant(data) + 1e-12 and bool(entire)


@dataclass(frozen=True)
class LiftLawReport:
    k: int
    degree_direct: float
    degree_law: float
    conductor_direct: float
    conductor_law: float

    @property
    def degree_diff(self) -> float:
        return abs(self.degree_direct - self.degree_law)

    @property
    def conductor_diff(self) -> float:
        return abs(self.conductor_direct - self.conductor_law)

    @property
    def conductor_rel_diff(self) -> float:
        return self.conductor_diff / self.conductor_law


def check_lift_laws(data: GammaFactorData, k: int) -> LiftLawReport:
    """Compare degree and conductor of the lifted data with ``k d`` and ``q^k k^(k d)``."""
    lifted = lift_data(data, k)
    d = degree(data)
    q = conductor(data)
    return LiftLawReport(
        k=k,
        degree_direct=degree(lifted),
        degree_law=k * d,
        conductor_direct=conductor(lifted),
        conductor_law=q**k * float(k) ** (k * d),
    )


def duplicate_factor(data: GammaFactorData, j: int) -> GammaFactorData:
    """Split the ``lambda_j = 1`` factor with the duplication formula.

    ``Gamma(s + mu) = 2^(s + mu - 1) pi^(-1/2) Gamma(s/2 + mu/2) Gamma(s/2 + mu/2 + 1/2)``;
    the ``2^s`` is absorbed into ``Q`` and the constant rescales ``omega`` by
    ``2^(conj(mu) - mu)``.
    """
    if abs(data.lam[j] - 1.0) > 1e-15:
        raise ValueError("duplication needs a factor with lambda = 1")
    m0 = data.mu[j]
    lam = data.lam[:j] + (0.5, 0.5) + data.lam[j + 1 :]
    mu = data.mu[:j] + (m0 / 2, (m0 + 1) / 2) + data.mu[j + 1 :]
    omega = data.omega * 2.0 ** (m0.conjugate() - m0)
    return GammaFactorData(2.0 * data.Q, lam, mu, omega, data.pole_order)


def _data(Q: float, lam: Sequence[float], mu: Sequence[complex], omega: complex = 1, m: int = 0):
    return GammaFactorData(Q, tuple(lam), tuple(mu), omega, m)


def zeta_data() -> GammaFactorData:
    return _data(math.pi**-0.5, [0.5], [0.0], 1.0, 1)


def eigenform_data(weight: int = 12) -> GammaFactorData:
    """Level-1 eigenform normalized to reflect ``s -> 1 - s``; root number ``i^weight``."""
    omega = (1, 1j, -1, -1j)[weight % 4]
    return _data(1 / (2 * math.pi), [1.0], [(weight - 1) / 2], omega, 0)
