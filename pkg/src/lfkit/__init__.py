"""Executable constructions around abscissae, lifts and majorants of L-functions."""

from lfkit.fe_core import (
    GammaFactorData,
    SelbergInvariants,
    b_invariant,
    check_lift_laws,
    conductor,
    degree,
    invariants,
    lift_admissible,
    lift_data,
)

__version__ = "0.1.0"

__all__ = [
    "GammaFactorData",
    "SelbergInvariants",
    "b_invariant",
    "check_lift_laws",
    "conductor",
    "degree",
    "invariants",
    "lift_admissible",
    "lift_data",
]
