"""SU(1,1) discrete-series coherent states and affine wavelet analysis on the half-line."""

from . import (
    algebra,
    errors,
    groups,
    morse,
    polynomials,
    quadrature,
    states,
    uncertainty,
    verify,
    wavelets,
)

__version__ = "0.1.0"

__all__ = [
    "algebra",
    "errors",
    "groups",
    "morse",
    "polynomials",
    "quadrature",
    "states",
    "uncertainty",
    "verify",
    "wavelets",
    "__version__",
]
