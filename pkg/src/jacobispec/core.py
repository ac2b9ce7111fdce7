"""Jacobi trigonometric system on (0, pi): parameters, eigenfunctions,
quadrature, and analysis/synthesis between point values and coefficients.

The orthonormal system is ``phi_n(theta) = psi(theta) * c_n * P_n(cos theta)``
where ``P_n`` are classical Jacobi polynomials, ``psi`` is the square root of
the Jacobi weight density, and ``c_n`` normalizes in L^2((0, pi), dtheta).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln


class SingularPairError(ValueError):
    """Operation undefined because alpha + beta == -1 (bottom eigenvalue 0)."""


class QuadratureError(RuntimeError):
    """A quadrature rule could not be built or failed its resolution contract."""


class TailConvergenceError(RuntimeError):
    """An infinite tail (series or integral) did not fall below threshold."""


@dataclass(frozen=True)
class ParameterPair:
    """Jacobi type parameters (alpha, beta), both > -1."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise ValueError(
                f"need alpha > -1 and beta > -1, got ({self.alpha}, {self.beta})"
            )

    @property
    def a(self) -> float:
        """Half sum shift (alpha + beta + 1) / 2; the bottom frequency."""
        return (self.alpha + self.beta + 1.0) / 2.0

    @property
    def singular(self) -> bool:
        # Exact equality on the stored reals: the dichotomy is structural,
        # configs must hit -1 exactly (e.g. alpha = beta = -0.5).
        return self.alpha + self.beta == -1.0

    def shifted(self, k: int) -> "ParameterPair":
        """The pair (alpha + k, beta + k) that derivatives map into."""
        return ParameterPair(self.alpha + k, self.beta + k)


@dataclass(frozen=True)
class ExponentRange:
    """Open interval (p'(alpha,beta), p(alpha,beta)) of admissible exponents."""

    lower: float
    upper: float  # math.inf when alpha, beta >= -1/2

    @classmethod
    def from_params(cls, params: ParameterPair) -> "ExponentRange":
        if params.alpha >= -0.5 and params.beta >= -0.5:
            upper = math.inf
        else:
            upper = -1.0 / min(params.alpha + 0.5, params.beta + 0.5)
        lower = 1.0 if math.isinf(upper) else upper / (upper - 1.0)
        return cls(lower=lower, upper=upper)

    def contains(self, p: float) -> bool:
        return self.lower < p < self.upper


def eigenvalue(n, params: ParameterPair):
    """Eigenvalue (n + (alpha+beta+1)/2)^2 of the n-th eigenfunction."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("eigenvalue defined for n >= 0")
    lam = (n_arr + params.a) ** 2
    return float(lam) if np.isscalar(n) else lam


def jacobi_polynomial(n: int, params: ParameterPair, x):
    """Evaluate the classical Jacobi polynomial P_n^{alpha,beta} at x."""
    if n < 0:
        raise ValueError("n must be >= 0")
    table = jacobi_polynomial_table(n, params, x)
    out = table[n]
    return float(out[()]) if np.isscalar(x) else out


def jacobi_polynomial_table(n_max: int, params: ParameterPair, x) -> np.ndarray:
    """Table of P_n^{alpha,beta}(x) for n = 0..n_max, shape (n_max+1,) + x.shape.

    Three-term recurrence; rows n = 0, 1 are the exact closed forms.  The
    recurrence coefficients are safe for all alpha, beta > -1 once n >= 2.
    """
    a, b = params.alpha, params.beta
    ab = a + b
    x = np.asarray(x, dtype=float)
    table = np.empty((n_max + 1,) + x.shape)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = (ab + 2.0) / 2.0 * x + (a - b) / 2.0
    for n in range(2, n_max + 1):
        c0 = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0)
        c1 = (2.0 * n + ab - 1.0) * (a * a - b * b)
        c2 = (2.0 * n + ab - 1.0) * (2.0 * n + ab) * (2.0 * n + ab - 2.0)
        c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + ab)
        table[n] = ((c1 + c2 * x) * table[n - 1] - c3 * table[n - 2]) / c0
    return table


def log_norm_constant_sq(n, params: ParameterPair) -> np.ndarray:
    """log(c_n^2) where c_n P_n(cos theta) is orthonormal in L^2(dmu).

    Computed in log-Gamma form.  The n = 0 row uses the limit
    (alpha+beta+1) Gamma(alpha+beta+1) = Gamma(alpha+beta+2), which also
    covers the singular case alpha + beta = -1.
    """
    a, b = params.alpha, params.beta
    ab = a + b
    n = np.atleast_1d(np.asarray(n, dtype=float))
    out = np.empty_like(n)
    pos = n >= 1
    if np.any(pos):
        m = n[pos]
        out[pos] = (
            np.log(2.0 * m + ab + 1.0)
            + gammaln(m + 1.0)
            + gammaln(m + ab + 1.0)
            - gammaln(m + a + 1.0)
            - gammaln(m + b + 1.0)
        )
    if np.any(~pos):
        out[~pos] = gammaln(ab + 2.0) - gammaln(a + 1.0) - gammaln(b + 1.0)
    return out


def normalization_constant(n: int, params: ParameterPair) -> float:
    """Positive constant c_n making c_n P_n(cos .) unit-norm against dmu."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return float(np.exp(0.5 * log_norm_constant_sq(n, params)[0]))


def psi_weight(theta, params: ParameterPair):
    """Half-weight (sin t/2)^(alpha+1/2) (cos t/2)^(beta+1/2), theta in (0, pi)."""
    theta_arr = np.asarray(theta, dtype=float)
    if np.any(theta_arr <= 0.0) or np.any(theta_arr >= math.pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    out = np.sin(theta_arr / 2.0) ** (params.alpha + 0.5) * np.cos(
        theta_arr / 2.0
    ) ** (params.beta + 0.5)
    return float(out[()]) if np.isscalar(theta) else out


def normalized_poly_table(n_max: int, params: ParameterPair, theta) -> np.ndarray:
    """Table of the orthonormal-in-dmu polynomials c_n P_n(cos theta)."""
    theta = np.asarray(theta, dtype=float)
    table = jacobi_polynomial_table(n_max, params, np.cos(theta))
    c = np.exp(0.5 * log_norm_constant_sq(np.arange(n_max + 1), params))
    return table * c.reshape((n_max + 1,) + (1,) * theta.ndim)


def phi_table(n_max: int, params: ParameterPair, theta) -> np.ndarray:
    """Table of eigenfunctions phi_n(theta) for n = 0..n_max."""
    theta_arr = np.asarray(theta, dtype=float)
    return normalized_poly_table(n_max, params, theta_arr) * psi_weight(
        theta_arr, params
    )


def phi(n: int, params: ParameterPair, theta):
    """Eigenfunction phi_n(theta); identically 0 for n < 0 by convention."""
    theta_arr = np.asarray(theta, dtype=float)
    if n < 0:
        out = np.zeros_like(theta_arr)
        # still reject endpoint evaluation, as every phi variant does
        psi_weight(theta_arr, params)
        return float(out[()]) if np.isscalar(theta) else out
    out = phi_table(n, params, theta_arr)[n]
    return float(out[()]) if np.isscalar(theta) else out


def _monic_recurrence(n: int, params: ParameterPair):
    """Diagonal/offdiagonal of the monic Jacobi recurrence, Golub-Welsch form.

    The k = 0 diagonal entry and the k = 1 off-diagonal entry use cancelled
    forms that stay finite for alpha + beta in {-1, 0}.
    """
    a, b = params.alpha, params.beta
    ab = a + b
    k = np.arange(n, dtype=float)
    diag = np.empty(n)
    diag[0] = (b - a) / (ab + 2.0)
    if n > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0))
    off = np.empty(max(n - 1, 0))
    if n > 1:
        off[0] = math.sqrt(4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) ** 2 * (ab + 3.0)))
    if n > 2:
        kk = k[2:]
        s = 2.0 * kk + ab
        num = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab)
        off[1:] = np.sqrt(num / (s * s * (s * s - 1.0)))
    return diag, off


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights on (0, pi) integrating against dtheta or dmu."""

    params: ParameterPair
    nodes: np.ndarray
    weights: np.ndarray
    measure: str  # "dtheta" | "dmu"

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, values) -> complex:
        values = np.asarray(values)
        acc = np.sum(self.weights * values)
        return complex(acc) if np.iscomplexobj(values) else float(acc)


MAX_QUADRATURE_N = 4000  # tridiagonal eigen-solve cap, documented contract


def mu_density(theta, params: ParameterPair):
    """Density of dmu: (sin t/2)^(2 alpha + 1) (cos t/2)^(2 beta + 1)."""
    theta = np.asarray(theta, dtype=float)
    return np.sin(theta / 2.0) ** (2.0 * params.alpha + 1.0) * np.cos(
        theta / 2.0
    ) ** (2.0 * params.beta + 1.0)


def quadrature_rule(
    n: int, params: ParameterPair, measure: str = "dtheta"
) -> QuadratureRule:
    """Gauss-Jacobi rule mapped to theta = arccos x.

    For ``measure="dmu"`` the rule integrates dmu-polynomials of degree
    <= 2n - 1 exactly; for ``measure="dtheta"`` weights are divided by the
    dmu density so the rule integrates against plain dtheta.
    """
    if n < 1:
        raise ValueError("rule size must be >= 1")
    if n > MAX_QUADRATURE_N:
        raise QuadratureError(f"rule size {n} exceeds cap {MAX_QUADRATURE_N}")
    if measure not in ("dtheta", "dmu"):
        raise ValueError(f"unknown measure tag {measure!r}")
    diag, off = _monic_recurrence(n, params)
    if n == 1:
        x = diag.copy()
        v0_sq = np.ones(1)
    else:
        x, vecs = eigh_tridiagonal(diag, off)
        v0_sq = vecs[0, :] ** 2
    ab = params.alpha + params.beta
    log_mu0 = (ab + 1.0) * math.log(2.0) + betaln(params.alpha + 1.0, params.beta + 1.0)
    w = math.exp(log_mu0) * v0_sq
    # arccos reverses order; sort theta ascending
    theta = np.arccos(x)[::-1]
    w = w[::-1] / 2.0 ** (ab + 1.0)  # dmu weights on (0, pi)
    if measure == "dtheta":
        w = w / mu_density(theta, params)
    if not (np.all(theta > 0.0) and np.all(theta < math.pi)):
        raise QuadratureError("nodes escaped the open interval (0, pi)")
    return QuadratureRule(params=params, nodes=theta, weights=w, measure=measure)


@dataclass(frozen=True)
class Expansion:
    """Finite coefficient vector over the phi_n system of a parameter pair."""

    params: ParameterPair
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if arr.ndim != 1:
            raise ValueError("coeffs must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coeffs must be finite")
        object.__setattr__(self, "coeffs", arr)

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_json(self) -> str:
        return json.dumps(
            {
                "alpha": self.params.alpha,
                "beta": self.params.beta,
                "coeffs": [{"re": z.real, "im": z.imag} for z in self.coeffs],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Expansion":
        rec = json.loads(text)
        coeffs = np.array(
            [complex(c["re"], c["im"]) for c in rec["coeffs"]], dtype=complex
        )
        return cls(ParameterPair(rec["alpha"], rec["beta"]), coeffs)


def unit_expansion(params: ParameterPair, n: int, n_modes: int | None = None) -> Expansion:
    """The single-mode expansion e_n (length n_modes, default n + 1)."""
    size = (n + 1) if n_modes is None else n_modes
    coeffs = np.zeros(size, dtype=complex)
    coeffs[n] = 1.0
    return Expansion(params, coeffs)


def fourier_coeffs(
    f, n_modes: int, params: ParameterPair, rule: QuadratureRule
) -> Expansion:
    """First n_modes Fourier-Jacobi coefficients a_n(f) = int f phi_n dtheta.

    ``f`` may be a callable on theta or an array of values on the rule nodes.
    The rule must integrate against dtheta and carry at least n_modes nodes
    (exactness on the span then holds up to degree pairing).
    """
    if rule.measure != "dtheta":
        raise ValueError("fourier_coeffs needs a dtheta-measure rule")
    if len(rule) < n_modes:
        raise QuadratureError(
            f"rule with {len(rule)} nodes under-resolves {n_modes} modes"
        )
    values = np.asarray(f(rule.nodes) if callable(f) else f)
    if values.shape != rule.nodes.shape:
        raise ValueError("value array does not match the rule nodes")
    table = phi_table(n_modes - 1, params, rule.nodes)
    coeffs = table @ (rule.weights * values)
    return Expansion(params, coeffs)


def synthesize(e: Expansion, theta):
    """Pointwise sum of the expansion at theta (complex)."""
    theta_arr = np.asarray(theta, dtype=float)
    if len(e) == 0:
        out = np.zeros(theta_arr.shape, dtype=complex)
        return complex(out[()]) if np.isscalar(theta) else out
    table = phi_table(len(e) - 1, params=e.params, theta=theta_arr)
    out = np.tensordot(e.coeffs, table, axes=(0, 0))
    return complex(out[()]) if np.isscalar(theta) else out
