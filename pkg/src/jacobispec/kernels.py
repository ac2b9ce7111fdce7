"""Jacobi-Poisson kernel in the polynomial setting, measure geometry of
((0, pi), dmu, |.|), the vertical fractional square function, and numerical
audits of the Calderon-Zygmund growth/gradient estimates.

The kernel series carry no closed form here; they are summed directly with
a polynomial-times-exponential tail bound.  The vertical norms integrate
t over log-spaced panels with a per-cell lower cut t_min ~ |theta-phi|/5
(floored at the t-floor policy) plus an analytic quadratic head correction
on (0, t_min); mode truncation adapts per t-row, so near-diagonal cells
are the only expensive ones.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import betainc, betaln, roots_legendre

from .core import (
    Expansion,
    ParameterPair,
    TailConvergenceError,
    eigenvalue,
    log_norm_constant_sq,
    mu_density,
    normalized_poly_table,
    quadrature_rule,
)
from .fractional import TimeQuadrature, time_quadrature_for
from .report import ExperimentReport, stats_from_samples
from .spaces import GridFunction, _ratio_report, lp_norm, random_expansion


@dataclass(frozen=True)
class HomogeneousSpace:
    """(0, pi) with the Jacobi measure dmu and the Euclidean distance."""

    params: ParameterPair

    def density(self, theta):
        return mu_density(theta, self.params)

    @property
    def total_mass(self) -> float:
        return math.exp(betaln(self.params.alpha + 1.0, self.params.beta + 1.0))


def ball_measure(space: HomogeneousSpace, theta, r) -> float | np.ndarray:
    """mu(B(theta, r) intersected with (0, pi)), via the incomplete Beta
    closed form of the dmu primitive."""
    theta = np.asarray(theta, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radius must be positive")
    a1 = space.params.alpha + 1.0
    b1 = space.params.beta + 1.0
    lo = np.clip(theta - r, 0.0, math.pi)
    hi = np.clip(theta + r, 0.0, math.pi)
    total = math.exp(betaln(a1, b1))
    vals = total * (
        betainc(a1, b1, np.sin(hi / 2.0) ** 2) - betainc(a1, b1, np.sin(lo / 2.0) ** 2)
    )
    return float(vals[()]) if vals.ndim == 0 else vals


def ball_comparability(space: HomogeneousSpace, theta, phi_) -> float | np.ndarray:
    """Closed-form comparator |t-p| (t+p)^(2a+1) (2 pi - t - p)^(2b+1)."""
    theta = np.asarray(theta, dtype=float)
    phi_ = np.asarray(phi_, dtype=float)
    a, b = space.params.alpha, space.params.beta
    vals = (
        np.abs(theta - phi_)
        * (theta + phi_) ** (2.0 * a + 1.0)
        * (2.0 * math.pi - theta - phi_) ** (2.0 * b + 1.0)
    )
    return float(vals[()]) if vals.ndim == 0 else vals


def q_form(theta, phi_, u, v):
    """Quadratic-distance form 1 - u sin(t/2) sin(p/2) - v cos(t/2) cos(p/2);
    at u = v = 1 it dominates |t - p|^2 / (2 pi^2)."""
    return (
        1.0
        - u * np.sin(np.asarray(theta) / 2.0) * np.sin(np.asarray(phi_) / 2.0)
        - v * np.cos(np.asarray(theta) / 2.0) * np.cos(np.asarray(phi_) / 2.0)
    )


Q_FORM_LOWER_CONSTANT = 1.0 / (2.0 * math.pi**2)


@dataclass(frozen=True)
class TruncationPolicy:
    rel_tol: float = 1e-14
    t_floor: float = 1e-4
    n_cap: int = 600_000
    block: int = 4096
    head_divisor: float = 15.0  # t-rows start near |theta-phi| / head_divisor


class _PolyStream:
    """Blockwise recurrence values of P_n^(a,b)(cos theta) at fixed points."""

    def __init__(self, params: ParameterPair, points: np.ndarray, block: int):
        self.params = params
        self.x = np.cos(np.asarray(points, dtype=float))
        self.block = block
        self.n_next = 0
        self._pm1 = None  # P_{n_next - 1}
        self._pm2 = None  # P_{n_next - 2}

    def next_block(self) -> np.ndarray:
        """Raw P_n values for n = n_next .. n_next + block - 1, shape (block, npts)."""
        a, b = self.params.alpha, self.params.beta
        ab = a + b
        x = self.x
        out = np.empty((self.block, x.size))
        for i in range(self.block):
            n = self.n_next + i
            if n == 0:
                row = np.ones_like(x)
            elif n == 1:
                row = (ab + 2.0) / 2.0 * x + (a - b) / 2.0
            else:
                c0 = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0)
                c1 = (2.0 * n + ab - 1.0) * (a * a - b * b)
                c2 = (2.0 * n + ab - 1.0) * (2.0 * n + ab) * (2.0 * n + ab - 2.0)
                c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + ab)
                row = ((c1 + c2 * x) * self._pm1 - c3 * self._pm2) / c0
            out[i] = row
            self._pm2 = self._pm1
            self._pm1 = row
        self.n_next += self.block
        return out


def _n_stop(t: float, q_eff: float, ln_tol: float = -34.5) -> int:
    """Index where (n+1)^q_eff exp(-t n) falls below exp(ln_tol) of its peak."""
    n_star = max(q_eff / t, 1.0)
    n = n_star
    for _ in range(4):
        n = n_star + (-ln_tol + q_eff * math.log((n + 1.0) / (n_star + 1.0))) / t
    return int(math.ceil(n))


def _kernel_time_rows(gamma: float, k_max: int, rate_floor: float):
    """Log head panels on [e^-k_max, 1] plus rate-adapted tail panels.

    Returns (t ascending, weights including t^(2 gamma - 1), head panel order).
    Row index 16 * (k_max - k) is where a cell snapped to edge e^-k starts.
    """
    gl_x, gl_w = roots_legendre(16)
    xs = []
    ws = []
    for k in range(k_max, 0, -1):
        lo, hi = -float(k), -float(k - 1)
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        x = mid + half * gl_x
        xs.append(np.exp(x))
        ws.append(half * gl_w * np.exp(2.0 * gamma * x))
    t_max = 1.0
    for _ in range(6):
        t_max = max(
            1.0,
            (
                38.0
                + max(2.0 * gamma - 1.0, 0.0) * math.log(max(t_max, 2.0))
                + abs(2.0 * gamma * math.log(rate_floor))
            )
            / rate_floor,
        )
    if t_max > 1.0:
        width = min(1.0, 2.0 / rate_floor)
        n_tail = int(math.ceil((t_max - 1.0) / width))
        edges = np.linspace(1.0, t_max, n_tail + 1)
        tx, tw = roots_legendre(12)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mid[:, None] + half[:, None] * tx[None, :]).ravel()
        xs.append(nodes)
        ws.append((half[:, None] * tw[None, :]).ravel() * nodes ** (2.0 * gamma - 1.0))
    return np.concatenate(xs), np.concatenate(ws)


def _vertical_norms(
    space: HomogeneousSpace,
    gamma: float,
    cells: np.ndarray,
    deriv: bool = False,
    policy: TruncationPolicy | None = None,
    mode_cap: int | None = None,
) -> np.ndarray:
    """L^2(t^(2 gamma - 1) dt) norms of the (optionally theta-differentiated)
    Caputo-derivative kernel series at each cell (theta, phi)."""
    policy = policy or TruncationPolicy()
    params = space.params
    cells = np.atleast_2d(np.asarray(cells, dtype=float))
    dist = np.abs(cells[:, 0] - cells[:, 1])
    if np.any(dist <= 0):
        raise ValueError("kernel is singular on the diagonal: need theta != phi")
    t_min_want = np.maximum(policy.t_floor, dist / 15.0)
    k_cell = np.ceil(-np.log(t_min_want)).astype(int)
    k_cell = np.maximum(k_cell, 1)
    k_max = int(np.max(k_cell))
    lam0 = eigenvalue(0, params)
    rate_floor = math.sqrt(lam0) if lam0 > 0 else math.sqrt(eigenvalue(1, params))
    rate_floor *= 2.0
    t_rows, w_rows = _kernel_time_rows(gamma, k_max, rate_floor)
    r0_cell = 16 * (k_max - k_cell)

    q_eff = 2.0 * (params.alpha + params.beta + 2.0) + gamma + (2.0 if deriv else 0.0)
    row_stop = np.array([_n_stop(t, q_eff) for t in t_rows])
    n_max = int(min(np.max(row_stop), policy.n_cap))
    if mode_cap is not None:
        n_max = min(n_max, mode_cap - 1)
    if np.max(row_stop) > policy.n_cap and mode_cap is None:
        raise TailConvergenceError(
            f"kernel truncation needs {int(np.max(row_stop))} modes, "
            f"cap is {policy.n_cap}; raise the t-floor or the cap"
        )

    points, inverse = np.unique(cells.ravel(), return_inverse=True)
    i_theta = inverse.reshape(cells.shape)[:, 0]
    i_phi = inverse.reshape(cells.shape)[:, 1]
    stream = _PolyStream(params, points, policy.block)
    stream_d = _PolyStream(params.shifted(1), points, policy.block) if deriv else None
    sin_pts = np.sin(points)

    acc = np.zeros((len(t_rows), cells.shape[0]))
    tiers = {}
    for idx, r0 in enumerate(r0_cell):
        tiers.setdefault(int(r0), []).append(idx)
    tiers = {r0: np.array(idx) for r0, idx in tiers.items()}

    ab1 = params.alpha + params.beta + 1.0
    prev_last_d = np.zeros(points.size)
    n0 = 0
    while n0 <= n_max:
        r_hi = int(np.searchsorted(-row_stop, -n0, side="right"))
        if r_hi == 0:
            break
        raw = stream.next_block()
        nb = raw.shape[0]
        if mode_cap is not None and n0 + nb > mode_cap:
            nb = mode_cap - n0  # hard cap is an exact truncation request
            if nb <= 0:
                break
            raw = raw[:nb]
        ns = np.arange(n0, n0 + nb)
        c_norm = np.exp(0.5 * log_norm_constant_sq(ns, params))
        v_vals = raw * c_norm[:, None]
        if deriv:
            raw_d = stream_d.next_block()[: nb if mode_cap is not None else None]
            # degree reduction: the n-th derivative row needs P_{n-1} of the
            # shifted pair, i.e. the previous row of the shifted stream
            shifted_rows = np.empty_like(raw_d)
            shifted_rows[0] = prev_last_d
            shifted_rows[1:] = raw_d[:-1]
            prev_last_d = raw_d[-1]
            u_vals = (
                shifted_rows
                * (-0.5 * sin_pts[None, :] * (ns + ab1)[:, None])
                * c_norm[:, None]
            )
        else:
            u_vals = v_vals
        lam = eigenvalue(ns, params)
        weights = lam ** (gamma / 2.0)
        e_block = np.exp(-np.outer(t_rows[:r_hi], np.sqrt(lam))) * weights[None, :]
        for r0, cell_idx in tiers.items():
            lo = max(r0, 0)
            if lo >= r_hi:
                continue
            d_mat = u_vals[:, i_theta[cell_idx]] * v_vals[:, i_phi[cell_idx]]
            acc[lo:r_hi, cell_idx] += e_block[lo:r_hi] @ d_mat
        n0 += nb

    norms = np.empty(cells.shape[0])
    for idx in range(cells.shape[0]):
        r0 = int(r0_cell[idx])
        body = float(np.sum(w_rows[r0:] * acc[r0:, idx] ** 2))
        # quadratic head model on (0, t_edge) from the first head panel
        t_edge = math.exp(-float(k_cell[idx]))
        sel = [r0, r0 + 7, r0 + 15]
        coeffs = np.polyfit(t_rows[sel], acc[sel, idx], 2)[::-1]
        head = 0.0
        for i in range(3):
            for j in range(3):
                head += (
                    coeffs[i]
                    * coeffs[j]
                    * t_edge ** (2.0 * gamma + i + j)
                    / (2.0 * gamma + i + j)
                )
        norms[idx] = math.sqrt(max(body + max(head, 0.0), 0.0))
    return norms


def frac_kernel_vertical_norm(
    space: HomogeneousSpace,
    gamma: float,
    theta: float,
    phi_: float,
    policy: TruncationPolicy | None = None,
    mode_cap: int | None = None,
) -> float:
    """Vertical norm of the fractional kernel at one off-diagonal pair."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if theta == phi_:
        raise ValueError("kernel is singular on the diagonal")
    return float(
        _vertical_norms(
            space, gamma, np.array([[theta, phi_]]), policy=policy, mode_cap=mode_cap
        )[0]
    )


def poisson_kernel_poly(
    space: HomogeneousSpace,
    t: float,
    theta: float,
    phi_: float,
    policy: TruncationPolicy | None = None,
) -> float:
    """Poisson kernel sum exp(-t sqrt(lambda_n)) P_n(theta) P_n(phi), summed
    until the polynomial tail bound drops below rel_tol of the partial sum."""
    policy = policy or TruncationPolicy()
    if t < policy.t_floor:
        raise ValueError(f"t below the truncation floor {policy.t_floor}")
    params = space.params
    q_exp = 2.0 * (params.alpha + params.beta + 2.0)
    stream = _PolyStream(params, np.array([theta, phi_]), policy.block)
    total = 0.0
    scale = 0.0
    n0 = 0
    while True:
        raw = stream.next_block()
        ns = np.arange(n0, n0 + raw.shape[0])
        c_norm = np.exp(0.5 * log_norm_constant_sq(ns, params))
        vals = raw * c_norm[:, None]
        rates = np.sqrt(eigenvalue(ns, params))
        terms = np.exp(-t * rates) * vals[:, 0] * vals[:, 1]
        total += float(np.sum(terms))
        scale = max(scale, float(np.max(np.abs(terms))))
        n_end = n0 + raw.shape[0]
        bound = (n_end + 1.0) ** q_exp * math.exp(
            -t * math.sqrt(eigenvalue(n_end, params))
        )
        ratio = (1.0 + 1.0 / (n_end + 1.0)) ** q_exp * math.exp(-t)
        if ratio < 1.0 and bound / (1.0 - ratio) <= policy.rel_tol * max(
            abs(total), scale
        ):
            return total
        n0 = n_end
        if n0 > policy.n_cap:
            raise TailConvergenceError(
                f"kernel series not converged within {policy.n_cap} terms"
            )


@dataclass(frozen=True)
class KernelAuditGrid:
    """Off-diagonal cell layout for the standard-estimate audits."""

    theta_count: int = 14
    offsets: tuple = (0.01, 0.0215, 0.0464, 0.1, 0.215, 0.464, 1.0)
    margin: float = 0.05

    def cells(self) -> np.ndarray:
        thetas = np.linspace(self.margin, math.pi - self.margin, self.theta_count)
        pairs = [
            (th, th + d)
            for th in thetas
            for d in self.offsets
            if th + d < math.pi - 1e-3
        ]
        return np.array(pairs)

    def doubled(self) -> "KernelAuditGrid":
        offs = np.geomspace(self.offsets[0], self.offsets[-1], 2 * len(self.offsets) - 1)
        return replace(self, theta_count=2 * self.theta_count, offsets=tuple(offs))


NEAR_DIAGONAL_GRID = KernelAuditGrid(
    theta_count=10, offsets=(0.001, 0.00215, 0.00464, 0.01)
)


def _audit_report(name, space, gamma, grid, policy, product_fn, t0):
    cells = grid.cells()
    base = product_fn(cells)
    fine = product_fn(grid.doubled().cells())
    sup_base = float(np.max(base))
    sup_fine = float(np.max(fine))
    drift = abs(sup_fine - sup_base) / sup_base
    finite = bool(np.all(np.isfinite(base)) and np.all(np.isfinite(fine)))
    return ExperimentReport(
        experiment=name,
        params={"alpha": space.params.alpha, "beta": space.params.beta},
        exponents={"gamma": gamma},
        seed=None,
        samples=len(base),
        stats=stats_from_samples(base),
        passed=bool(finite and drift < 0.10),
        runtime_ms=1000.0 * (time.perf_counter() - t0),
        extra={
            "sup_base": sup_base,
            "sup_doubled_grid": sup_fine,
            "drift_grid": drift,
            "heatmap": {
                "theta": cells[:, 0].tolist(),
                "phi": cells[:, 1].tolist(),
                "product": base.tolist(),
            },
        },
        config={
            "theta_count": grid.theta_count,
            "offsets": list(grid.offsets),
            "margin": grid.margin,
            "t_floor": (policy or TruncationPolicy()).t_floor,
        },
    )


def cz_growth_audit(
    space: HomogeneousSpace,
    gamma: float,
    grid: KernelAuditGrid | None = None,
    policy: TruncationPolicy | None = None,
) -> ExperimentReport:
    """Growth estimate audit: sup over the grid of
    ||K(theta,phi)|| * mu(B(theta, |theta-phi|)), refinement-stable."""
    t0 = time.perf_counter()
    grid = grid or KernelAuditGrid()

    def products(cells):
        norms = _vertical_norms(space, gamma, cells, deriv=False, policy=policy)
        balls = ball_measure(space, cells[:, 0], np.abs(cells[:, 0] - cells[:, 1]))
        return norms * balls

    return _audit_report(
        "cz_growth_audit", space, gamma, grid, policy, products, t0
    )


def cz_gradient_audit(
    space: HomogeneousSpace,
    gamma: float,
    grid: KernelAuditGrid | None = None,
    policy: TruncationPolicy | None = None,
) -> ExperimentReport:
    """Gradient estimate audit: sup of
    (||d_theta K|| + ||d_phi K||) * |theta-phi| * mu(B(theta, |theta-phi|))."""
    t0 = time.perf_counter()
    grid = grid or KernelAuditGrid()

    def products(cells):
        d_theta = _vertical_norms(space, gamma, cells, deriv=True, policy=policy)
        d_phi = _vertical_norms(
            space, gamma, cells[:, ::-1], deriv=True, policy=policy
        )
        dist = np.abs(cells[:, 0] - cells[:, 1])
        balls = ball_measure(space, cells[:, 0], dist)
        return (d_theta + d_phi) * dist * balls

    return _audit_report(
        "cz_gradient_audit", space, gamma, grid, policy, products, t0
    )


def _power_log_panels(power: float, order: int = 12):
    """Nodes/weights for int_0^1 t^power g(t) dt with power > -1."""
    if power <= -1.0:
        raise ValueError("power must be > -1")
    x_min = -38.0 / (power + 1.0)
    n_panels = int(math.ceil(-x_min))
    edges = np.linspace(x_min, 0.0, n_panels + 1)
    gx, gw = roots_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    xs = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    ws = (half[:, None] * gw[None, :]).ravel() * np.exp((power + 1.0) * xs)
    return np.exp(xs), ws


def lemma36_check(
    eta: float,
    xi: float,
    gamma: float,
    q_grid=None,
    spread_tol: float = 5.0,
) -> ExperimentReport:
    """Two-branch bound check for the nested integral
    int_0^1 (int_0^1 t^(2 gamma - 1) ((t+s)^2 + q)^(-eta) dt)^(1/2) s^xi ds.

    Branch: q^(-(eta-xi-gamma-1)/2) when eta - xi - gamma > 1, else log(4/q).
    """
    if xi <= -1.0 or gamma <= 0:
        raise ValueError("need xi > -1 and gamma > 0")
    t0 = time.perf_counter()
    if q_grid is None:
        q_grid = 10.0 ** (-np.arange(0.0, 6.5, 0.5))
    q_grid = np.asarray(q_grid, dtype=float)
    t_nodes, t_w = _power_log_panels(2.0 * gamma - 1.0)
    s_nodes, s_w = _power_log_panels(xi)
    d = eta - xi - gamma
    ratios = []
    for q in q_grid:
        inner = ((t_nodes[:, None] + s_nodes[None, :]) ** 2 + q) ** (-eta)
        inner_int = t_w @ inner
        value = float(np.sum(s_w * np.sqrt(inner_int)))
        bound = q ** (-(d - 1.0) / 2.0) if d > 1.0 else math.log(4.0 / q)
        ratios.append(value / bound)
    ratios = np.array(ratios)
    spread = float(np.max(ratios) / np.min(ratios))
    passed = bool(np.all(np.isfinite(ratios)) and spread < spread_tol)
    return ExperimentReport(
        experiment="lemma36",
        params={},
        exponents={"eta": eta, "xi": xi, "gamma": gamma},
        seed=None,
        samples=len(q_grid),
        stats=stats_from_samples(ratios),
        passed=passed,
        runtime_ms=1000.0 * (time.perf_counter() - t0),
        extra={
            "branch": "power" if d > 1.0 else "log",
            "q_grid": q_grid.tolist(),
            "ratios": ratios.tolist(),
            "spread": spread,
        },
        config={"spread_tol": spread_tol},
    )


def poly_synthesize(e: Expansion, theta):
    """Pointwise sum of a polynomial-system expansion at theta."""
    theta_arr = np.asarray(theta, dtype=float)
    table = normalized_poly_table(len(e) - 1, e.params, theta_arr)
    out = np.tensordot(e.coeffs, table, axes=(0, 0))
    return complex(out[()]) if np.isscalar(theta) else out


def g_vertical_poly(
    space: HomogeneousSpace,
    e: Expansion,
    gamma: float,
    theta,
    tq: TimeQuadrature | None = None,
):
    """Vertical square function in the polynomial setting: the L^2(t^(2g-1)dt)
    norm in t of the Caputo derivative of the dmu-semigroup at theta."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if e.params != space.params:
        raise ValueError("expansion and space parameter pairs differ")
    if tq is None:
        tq = time_quadrature_for(space.params, 2.0 * gamma, n_hint=max(len(e), 1))
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    lam = eigenvalue(np.arange(len(e)), space.params)
    table = normalized_poly_table(len(e) - 1, space.params, theta_arr)
    coef = (e.coeffs * lam ** (gamma / 2.0))[:, None] * table
    s = np.exp(-np.outer(tq.nodes, np.sqrt(lam))) @ coef
    gsq = tq.weights @ (s.real**2 + s.imag**2)
    out = np.sqrt(np.maximum(gsq, 0.0))
    return float(out[0]) if np.isscalar(theta) else out


def power_weight(params: ParameterPair, p: float, theta):
    """The A_p power weight (psi^(alpha,beta))^p / psi^(2a+1/2, 2b+1/2),
    i.e. psi^p divided by the dmu density."""
    from .core import psi_weight

    return psi_weight(theta, params) ** p / mu_density(theta, params)


def weighted_gfunction_experiment(
    params: ParameterPair,
    p: float,
    gamma: float,
    samples: int = 300,
    seed: int = 0,
    rule_n: int = 96,
    n_modes: int = 32,
    decay: float = 1.5,
) -> ExperimentReport:
    """Two-sided ratio ||g^gamma(f)|| / ||f|| in L^p(w dmu) with the power
    weight of the transference argument, over random polynomial expansions."""
    space = HomogeneousSpace(params)
    tq = time_quadrature_for(params, 2.0 * gamma, n_hint=n_modes)
    rules = [quadrature_rule(rule_n, params, "dmu"),
             quadrature_rule(2 * rule_n, params, "dmu")]
    weighted = [
        GridFunction(
            nodes=r.nodes,
            values=np.zeros_like(r.nodes),
            weights=r.weights * power_weight(params, p, r.nodes),
            measure="weighted",
        )
        for r in rules
    ]

    def ratio(level):
        rule, wgf = rules[level], weighted[level]

        def fn(e):
            g_vals = g_vertical_poly(space, e, gamma, rule.nodes, tq)
            num = lp_norm(replace(wgf, values=g_vals), p)
            f_vals = poly_synthesize(e, rule.nodes)
            if params.singular:
                num += abs(e.coeffs[0])
            return num / lp_norm(replace(wgf, values=f_vals), p)

        return fn

    report, _ = _ratio_report(
        "weighted_gfunction",
        params,
        {"p": p, "gamma": gamma},
        [ratio(0), ratio(1)],
        samples,
        seed,
        n_modes,
        decay,
        config={"rule_n": rule_n, "n_modes": n_modes, "decay": decay,
                "weight": "psi^p / mu-density"},
        two_sided=True,
    )
    return report
