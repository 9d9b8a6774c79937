"""Desk-scale numerical workbench for the Heisenberg commutation relation.

Bounded impossibility checks, the grid representation of position and
momentum on L2(R), Bernstein approximation, finite-dimensional spectral
theory and matrix models of finite von Neumann algebras.
"""

from .errors import (
    ConvergenceError,
    InputError,
    NotEquivalentError,
    NotHermitianError,
    NumericalError,
    OpSpectraError,
    SingularityError,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "InputError",
    "NotEquivalentError",
    "NotHermitianError",
    "NumericalError",
    "OpSpectraError",
    "SingularityError",
]
