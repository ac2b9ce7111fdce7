"""Numerical toolkit for Jacobi trigonometric expansions on (0, pi)."""

from .core import (
    Expansion,
    ExponentRange,
    ParameterPair,
    QuadratureError,
    QuadratureRule,
    SingularPairError,
    TailConvergenceError,
    eigenvalue,
    fourier_coeffs,
    jacobi_polynomial,
    normalization_constant,
    phi,
    psi_weight,
    quadrature_rule,
    synthesize,
    unit_expansion,
)

__all__ = [
    "Expansion",
    "ExponentRange",
    "ParameterPair",
    "QuadratureError",
    "QuadratureRule",
    "SingularPairError",
    "TailConvergenceError",
    "eigenvalue",
    "fourier_coeffs",
    "jacobi_polynomial",
    "normalization_constant",
    "phi",
    "psi_weight",
    "quadrature_rule",
    "synthesize",
    "unit_expansion",
]

__version__ = "0.1.0"
