"""Exact checks for alternating sums over set systems, power sums of
root-of-unity sets, binary Fourier pairs and the group-equation system."""

from .errors import (ArithmeticOverflow, CapExceeded, EmptyReduction, InvalidInput,
                     ModulusMismatch, NotBinaryPartner, UnityFiltersError)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticOverflow", "CapExceeded", "EmptyReduction", "InvalidInput",
    "ModulusMismatch", "NotBinaryPartner", "UnityFiltersError",
]
