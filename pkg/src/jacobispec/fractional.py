"""Caputo-type fractional derivatives of Poisson integrals and the four
fractional square functions (plain, k-derivative, and their shifted
variants for the modified Laplacian), plus the L^2 isometry checks.

The t-integrals dt/t are discretized by a validated TimeQuadrature:
log-substituted panels on (0, 1] and rate-adapted panels on [1, T], with
the density t^(2 gamma - 1) folded into the weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, roots_legendre

from .core import (
    Expansion,
    ParameterPair,
    TailConvergenceError,
    eigenvalue,
    phi_table,
    quadrature_rule,
)


def _panel_nodes(edges: np.ndarray, order: int):
    """Composite Gauss-Legendre nodes/weights over consecutive edges."""
    x, w = roots_legendre(order)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class TimeQuadrature:
    """Nodes/weights approximating int_0^inf t^(g-1) G(t) dt = sum w G(t).

    ``gamma_exponent`` is the density exponent g; ``rate_floor`` is the
    slowest exponential decay rate the tail is sized for.
    """

    scheme: str
    nodes: np.ndarray
    weights: np.ndarray
    gamma_exponent: float
    rate_floor: float

    @classmethod
    def build(
        cls,
        gamma_exponent: float,
        rate_floor: float,
        rate_cap: float = 420.0,
    ) -> "TimeQuadrature":
        if gamma_exponent <= 0 or rate_floor <= 0:
            raise ValueError("gamma_exponent and rate_floor must be > 0")
        g = gamma_exponent
        # head cut: int_0^t0 t^(g-1) e^(-ct) dt <= 1e-10 * Gamma(g)/c^g
        # for every c <= rate_cap
        x_min = (math.log(1e-10) + math.log(g) + gammaln(g)) / g - math.log(rate_cap)
        x_min = min(x_min, -8.0)
        n_head = int(math.ceil(-x_min))
        head_edges = np.linspace(x_min, 0.0, n_head + 1)
        hx, hw = _panel_nodes(head_edges, 16)
        head_nodes = np.exp(hx)
        head_weights = hw * np.exp(g * hx)
        # tail cut: exponential decay at rate_floor beats the density
        t_max = 1.0
        for _ in range(6):
            t_max = max(
                1.0,
                (
                    38.0
                    + max(g - 1.0, 0.0) * math.log(max(t_max, 2.0))
                    + abs(g * math.log(rate_floor))
                )
                / rate_floor,
            )
        if t_max > 1.0:
            width = min(1.0, 2.0 / rate_floor)
            n_tail = int(math.ceil((t_max - 1.0) / width))
            tail_edges = np.linspace(1.0, t_max, n_tail + 1)
            tx, tw = _panel_nodes(tail_edges, 12)
            nodes = np.concatenate([head_nodes, tx])
            weights = np.concatenate([head_weights, tw * tx ** (g - 1.0)])
        else:
            nodes, weights = head_nodes, head_weights
        return cls(
            scheme="split-log",
            nodes=nodes,
            weights=weights,
            gamma_exponent=g,
            rate_floor=rate_floor,
        )

    def validate(self, lambdas) -> float:
        """Max relative error on int t^(g-1) exp(-2 t sqrt(lam)) dt."""
        lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
        rates = 2.0 * np.sqrt(lambdas)
        approx = np.exp(-np.outer(rates, self.nodes)) @ self.weights
        g = self.gamma_exponent
        exact = np.exp(gammaln(g) - g * np.log(rates))
        return float(np.max(np.abs(approx - exact) / exact))


def time_quadrature_for(
    params: ParameterPair,
    gamma_exponent: float,
    shifted: bool = False,
    n_hint: int = 64,
) -> TimeQuadrature:
    """Default rule for a parameter pair: tail adapted to the bottom rate,
    head resolving frequencies up to the n_hint-th eigenvalue (at least
    the lambda <= 1e4 validation range)."""
    lam0 = eigenvalue(0, params)
    if shifted:
        rate_floor = 2.0 * (1.0 + math.sqrt(lam0))
    else:
        rate_floor = 2.0 * math.sqrt(lam0) if lam0 > 0 else 2.0 * math.sqrt(0.1)
    lam_hi = max(1.0e4, eigenvalue(max(n_hint, 1), params))
    rate_cap = 2.0 * (math.sqrt(lam_hi) + (1.0 if shifted else 0.0)) * 1.05
    return TimeQuadrature.build(gamma_exponent, rate_floor, rate_cap)


def caputo_poisson(e: Expansion, gamma: float, t: float, theta):
    """Closed-form Caputo derivative of the Poisson integral at (t, theta):
    (-1)^m sum lambda_n^(gamma/2) exp(-t sqrt(lambda_n)) a_n phi_n(theta)."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if t <= 0:
        raise ValueError("t must be > 0")
    m = math.floor(gamma) + 1
    lam = eigenvalue(np.arange(len(e)), e.params)
    factor = lam ** (gamma / 2.0) * np.exp(-t * np.sqrt(lam))
    theta_arr = np.asarray(theta, dtype=float)
    table = phi_table(len(e) - 1, e.params, theta_arr)
    out = (-1.0) ** m * np.tensordot(factor * e.coeffs, table, axes=(0, 0))
    return complex(out[()]) if np.isscalar(theta) else out


def poisson_time_derivative(e: Expansion, order: int, theta: float):
    """Exact order-th t-derivative of H_t f(theta) as a callable of t.

    Independent input for caputo_numeric; evaluates
    sum (-sqrt(lambda_n))^order a_n exp(-t sqrt(lambda_n)) phi_n(theta).
    """
    lam = eigenvalue(np.arange(len(e)), e.params)
    rates = np.sqrt(lam)
    coef = e.coeffs * (-rates) ** order * phi_table(len(e) - 1, e.params, theta)

    def deriv(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        return np.exp(-np.outer(ts, rates)) @ coef

    return deriv


def caputo_numeric(
    deriv_m,
    gamma: float,
    t: float,
    rel_tol: float = 1e-14,
    s_cap: float = 1e6,
):
    """Caputo derivative by direct quadrature of its defining integral:
    (1/Gamma(m-gamma)) int_0^inf F^(m)(t+s) s^(m-gamma-1) ds, m = floor+1.

    ``deriv_m`` must evaluate the m-th derivative of F on an array of
    points.  The s-integral is truncated where the integrand falls below
    rel_tol of its peak and the endpoint singularity is removed by the
    substitution u = s^(m-gamma).
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if t <= 0:
        raise ValueError("t must be > 0")
    m = math.floor(gamma) + 1
    delta = m - gamma
    probe = np.concatenate([[0.0], np.geomspace(1e-8 * max(t, 1.0), max(t, 1.0), 64)])
    peak = float(np.max(np.abs(deriv_m(t + probe))))
    if peak == 0.0:
        return 0.0 + 0.0j
    s_hi = max(t, 1.0)
    while float(np.abs(deriv_m(np.array([t + s_hi]))[0])) > rel_tol * peak:
        s_hi *= 2.0
        if s_hi > s_cap:
            raise TailConvergenceError(
                f"integrand above {rel_tol} of its peak out to s = {s_cap}"
            )
    u_hi = s_hi**delta
    edges = u_hi * 2.0 ** (-np.arange(51.0))
    edges = np.concatenate([[0.0], edges[::-1]])
    u, w = _panel_nodes(edges, 16)
    vals = deriv_m(t + u ** (1.0 / delta))
    integral = np.sum(w * vals)
    return integral / (delta * math.gamma(delta))


def _modal_time_matrix(e, mode_weights, rates, theta_arr, tq):
    """S[i, j] = sum_n w_n a_n exp(-t_i r_n) phi_n(theta_j)."""
    table = phi_table(len(e) - 1, e.params, theta_arr)
    coef = (e.coeffs * mode_weights)[:, None] * table
    return np.exp(-np.outer(tq.nodes, rates)) @ coef


def _square_function(e, theta, mode_weights, rates, tq):
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    if len(e) == 0:
        out = np.zeros_like(theta_arr)
        return float(out[0]) if np.isscalar(theta) else out
    s = _modal_time_matrix(e, mode_weights, rates, theta_arr, tq)
    gsq = tq.weights @ (s.real**2 + s.imag**2)
    gsq = np.maximum(gsq, 0.0)
    out = np.sqrt(gsq)
    return float(out[0]) if np.isscalar(theta) else out


def _check_tq(tq, gamma_exponent):
    if abs(tq.gamma_exponent - gamma_exponent) > 1e-12:
        raise ValueError(
            f"time quadrature built for exponent {tq.gamma_exponent}, "
            f"needed {gamma_exponent}"
        )


def g_fractional(
    e: Expansion, gamma: float, theta, tq: TimeQuadrature | None = None
):
    """Fractional square function of order gamma at theta."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if tq is None:
        tq = time_quadrature_for(e.params, 2.0 * gamma, n_hint=max(len(e), 1))
    _check_tq(tq, 2.0 * gamma)
    lam = eigenvalue(np.arange(len(e)), e.params)
    return _square_function(e, theta, lam ** (gamma / 2.0), np.sqrt(lam), tq)


def g_fractional_k(
    e: Expansion,
    gamma: float,
    k: int,
    theta,
    tq: TimeQuadrature | None = None,
):
    """Square function with exact k-th t-derivative and weight t^(k-gamma)."""
    if not 0 < gamma < k:
        raise ValueError("need 0 < gamma < k")
    if tq is None:
        tq = time_quadrature_for(e.params, 2.0 * (k - gamma), n_hint=max(len(e), 1))
    _check_tq(tq, 2.0 * (k - gamma))
    lam = eigenvalue(np.arange(len(e)), e.params)
    return _square_function(e, theta, lam ** (k / 2.0), np.sqrt(lam), tq)


def g_tilde(e: Expansion, gamma: float, theta, tq: TimeQuadrature | None = None):
    """Square function of the shifted semigroup exp(-t) H_t."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if tq is None:
        tq = time_quadrature_for(
            e.params, 2.0 * gamma, shifted=True, n_hint=max(len(e), 1)
        )
    _check_tq(tq, 2.0 * gamma)
    lam = eigenvalue(np.arange(len(e)), e.params)
    shifted = 1.0 + np.sqrt(lam)
    return _square_function(e, theta, shifted**gamma, shifted, tq)


def g_tilde_k(
    e: Expansion,
    gamma: float,
    k: int,
    theta,
    tq: TimeQuadrature | None = None,
):
    """k-th derivative square function of the shifted semigroup."""
    if not 0 < gamma < k:
        raise ValueError("need 0 < gamma < k")
    if tq is None:
        tq = time_quadrature_for(
            e.params, 2.0 * (k - gamma), shifted=True, n_hint=max(len(e), 1)
        )
    _check_tq(tq, 2.0 * (k - gamma))
    lam = eigenvalue(np.arange(len(e)), e.params)
    shifted = 1.0 + np.sqrt(lam)
    return _square_function(e, theta, shifted**k, shifted, tq)


@dataclass(frozen=True)
class IsometryReport:
    lhs: float
    rhs: float
    rel_err: float


def l2_isometry_check(
    e: Expansion,
    gamma: float,
    rule=None,
    tq: TimeQuadrature | None = None,
) -> IsometryReport:
    """Check ||f||_2^2 = 4^gamma/Gamma(2 gamma) ||g^gamma(f)||_2^2
    (+ |a_0|^2 when alpha + beta = -1)."""
    from .core import synthesize

    if rule is None:
        rule = quadrature_rule(max(64, 2 * len(e)), e.params, "dtheta")
    f_vals = synthesize(e, rule.nodes)
    lhs = float(np.sum(rule.weights * np.abs(f_vals) ** 2))
    g_vals = g_fractional(e, gamma, rule.nodes, tq)
    rhs = 4.0**gamma / math.gamma(2.0 * gamma) * float(
        np.sum(rule.weights * g_vals**2)
    )
    if e.params.singular and len(e):
        rhs += abs(e.coeffs[0]) ** 2
    rel_err = abs(lhs - rhs) / max(lhs, 1e-300)
    return IsometryReport(lhs=lhs, rhs=rhs, rel_err=rel_err)


def polarized_identity_check(
    f: Expansion,
    g: Expansion,
    gamma: float,
    rule=None,
    tq: TimeQuadrature | None = None,
) -> IsometryReport:
    """Polarized isometry: <f, g> against the t-integrated pairing of the
    Caputo derivatives of the two Poisson integrals."""
    from .core import synthesize

    if f.params != g.params:
        raise ValueError("expansions must share a parameter pair")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    params = f.params
    if rule is None:
        rule = quadrature_rule(max(64, 2 * max(len(f), len(g))), params, "dtheta")
    if tq is None:
        tq = time_quadrature_for(
            params, 2.0 * gamma, n_hint=max(len(f), len(g), 1)
        )
    _check_tq(tq, 2.0 * gamma)
    lhs = complex(
        np.sum(rule.weights * synthesize(f, rule.nodes) * np.conj(synthesize(g, rule.nodes)))
    )
    lam_f = eigenvalue(np.arange(len(f)), params)
    lam_g = eigenvalue(np.arange(len(g)), params)
    s_f = _modal_time_matrix(
        f, lam_f ** (gamma / 2.0), np.sqrt(lam_f), rule.nodes, tq
    )
    s_g = _modal_time_matrix(
        g, lam_g ** (gamma / 2.0), np.sqrt(lam_g), rule.nodes, tq
    )
    inner = tq.weights @ (s_f * np.conj(s_g))
    rhs = 4.0**gamma / math.gamma(2.0 * gamma) * complex(np.sum(rule.weights * inner))
    if params.singular and len(f) and len(g):
        rhs += f.coeffs[0] * np.conj(g.coeffs[0])
    rel_err = abs(lhs - rhs) / max(abs(lhs), 1e-300)
    return IsometryReport(lhs=abs(lhs), rhs=abs(rhs), rel_err=rel_err)
