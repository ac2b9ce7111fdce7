"""Spectral multiplier engine and the operators defined through it:
Poisson semigroup, Riesz/Bessel/modified potentials, first-order derivative,
its iterates, and the Riesz transforms.

All operators act on coefficient vectors only; pointwise application is
always synthesize(apply(fourier_coeffs(f))).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Expansion, ParameterPair, SingularPairError, eigenvalue


@dataclass(frozen=True)
class Multiplier:
    """Coefficient map b_{n+shift} = symbol(n) * a_n, with phi_{<0} dropped."""

    symbol: Callable[[np.ndarray], np.ndarray]
    shift: int
    source_params: ParameterPair
    target_params: ParameterPair


def apply_multiplier(e: Expansion, m: Multiplier) -> Expansion:
    if e.params != m.source_params:
        raise ValueError("expansion parameters do not match the multiplier source")
    n = np.arange(len(e))
    out_len = max(len(e) + m.shift, 0)
    out = np.zeros(out_len, dtype=complex)
    if len(e):
        vals = np.asarray(m.symbol(n), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise ValueError("multiplier symbol not finite on the used indices")
        target = n + m.shift
        keep = target >= 0
        out[target[keep]] = vals[keep] * e.coeffs[keep]
    return Expansion(m.target_params, out)


def _diagonal(e: Expansion, symbol) -> Expansion:
    return apply_multiplier(
        e,
        Multiplier(
            symbol=symbol, shift=0, source_params=e.params, target_params=e.params
        ),
    )


def poisson(e: Expansion, t: float) -> Expansion:
    """Poisson semigroup: multiplier exp(-t sqrt(lambda_n)); t = 0 is identity."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return e
    return _diagonal(e, lambda n: np.exp(-t * np.sqrt(eigenvalue(n, e.params))))


def riesz_potential(e: Expansion, sigma: float) -> Expansion:
    """Riesz potential: multiplier lambda_n^(-sigma); needs alpha+beta != -1."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    if e.params.singular:
        raise SingularPairError(
            "Riesz potential undefined: alpha + beta = -1 puts 0 in the spectrum"
        )
    return _diagonal(e, lambda n: eigenvalue(n, e.params) ** (-sigma))


def bessel_potential(e: Expansion, sigma: float) -> Expansion:
    """Bessel potential: multiplier (1 + lambda_n)^(-sigma), any parameters."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    return _diagonal(e, lambda n: (1.0 + eigenvalue(n, e.params)) ** (-sigma))


def modified_bessel_potential(e: Expansion, gamma: float) -> Expansion:
    """Modified potential: multiplier (1 + sqrt(lambda_n))^(-gamma)."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    return _diagonal(
        e, lambda n: (1.0 + np.sqrt(eigenvalue(n, e.params))) ** (-gamma)
    )


def derivative_D(e: Expansion) -> Expansion:
    """First-order derivative: phi_n -> -sqrt(lambda_n - lambda_0) phi_{n-1}
    in the (alpha+1, beta+1) system.  The n = 0 mode is annihilated by the
    vanishing square-root factor, no special-casing.
    """
    params = e.params
    lam0 = eigenvalue(0, params)
    return apply_multiplier(
        e,
        Multiplier(
            symbol=lambda n: -np.sqrt(eigenvalue(n, params) - lam0),
            shift=-1,
            source_params=params,
            target_params=params.shifted(1),
        ),
    )


def higher_derivative(e: Expansion, k: int) -> Expansion:
    """k-fold composition of derivative_D with parameter stepping."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = e
    for _ in range(k):
        out = derivative_D(out)
    return out


def riesz_transform(e: Expansion, k: int) -> Expansion:
    """Riesz-Jacobi transform of order k, dispatching on the singular flag."""
    if k < 1:
        raise ValueError("k must be >= 1")
    pot = (
        bessel_potential(e, k / 2.0)
        if e.params.singular
        else riesz_potential(e, k / 2.0)
    )
    return higher_derivative(pot, k)
