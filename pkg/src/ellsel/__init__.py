"""Numerical elliptic special functions, BC-symmetric interpolation
functions, Selberg-type densities and a torus-quadrature verification
harness for their integral evaluations."""

from ellsel.core import (
    DomainError,
    NomePair,
    PoleError,
    elliptic_gamma,
    elliptic_gamma_multi,
    elliptic_shifted_factorial,
    theta,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NomePair",
    "PoleError",
    "elliptic_gamma",
    "elliptic_gamma_multi",
    "elliptic_shifted_factorial",
    "theta",
    "__version__",
]
