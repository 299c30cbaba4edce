"""Geodesic spray, nonlinear connection, Chern-type connection coefficients
and horizontal covariant derivatives.

Everything is built by evaluating the closed-form metric layer on jets, so
no derivative here is ever taken by finite differences; the order of jet
nesting (base-coordinate seeds outside fibre seeds inside a single assembly)
is fixed by the evaluation order in this module, making results reproducible
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import jets
from .base_space import christoffel_at
from .errors import ConvergenceError, DomainError
from .finsleroid_pd import (PDCore, Q_MIN_FACTOR, g_inv_of, g_mat_of,
                            guarded_core, pd_scalars, y_low_of)


def spray_at(space, xc, yc):
    """Geodesic coefficients, generic over jets.

    2 * spray^i = gamma^i_nm y^n y^m; assembled as
    spray^i = 1/2 g^{il} (y^m d(y_l)/dx^m - 1/2 dK^2/dx^l).
    """
    n = space.n
    core = PDCore(space, xc, yc)
    ginv = g_inv_of(core)
    dylow = []
    dk2 = []
    for m in range(n):
        lvl = jets.fresh_level()
        c2 = PDCore(space, jets.seed_component(xc, m, lvl), yc)
        yl = y_low_of(c2)
        dylow.append([jets.eps(yl[l], lvl) for l in range(n)])
        dk2.append(jets.eps(c2.K2, lvl))
    term = []
    for l in range(n):
        acc = -0.5 * dk2[l]
        for m in range(n):
            acc = acc + yc[m] * dylow[m][l]
        term.append(acc)
    return [0.5 * sum(ginv[i][l] * term[l] for l in range(n))
            for i in range(n)]


def background_spray_at(space, xc, yc):
    """Spray of the background Riemannian metric alone; the continuous
    extension of the full spray onto the axis for Landsberg-type spaces."""
    n = space.n
    gamma = christoffel_at(space, xc)
    return [0.5 * sum(gamma[i][p][q] * yc[p] * yc[q]
                      for p in range(n) for q in range(n))
            for i in range(n)]


@dataclass
class SprayData:
    g_up: np.ndarray    # spray coefficients
    n_mix: np.ndarray   # nonlinear connection d(spray)^i / dy^j
    g3: np.ndarray      # second fibre derivatives [i][j][k]
    g4: np.ndarray      # third fibre derivatives [i][j][k][l]


def spray(space, x, y):
    """Spray data with fibre derivatives up to third order."""
    guarded_core(space, x, y)  # enforce the axis guard
    n = space.n
    xf = [float(c) for c in x]
    yf = [float(c) for c in y]
    g_up = np.array([jets.real(v) for v in spray_at(space, xf, yf)])
    n_mix = np.zeros((n, n))
    g3 = np.zeros((n, n, n))
    g4 = np.zeros((n, n, n, n))
    # one triple-seeded evaluation per j <= k <= l also yields the lower
    # derivatives by reading shallower epsilon slots
    for j in range(n):
        for k in range(j, n):
            for l in range(k, n):
                l1, l2, l3 = (jets.fresh_level() for _ in range(3))
                ys = jets.seed_component(yf, j, l1)
                ys = jets.seed_component(ys, k, l2)
                ys = jets.seed_component(ys, l, l3)
                gv = spray_at(space, xf, ys)
                for i in range(n):
                    d3 = jets.real(jets.eps(jets.eps(jets.eps(
                        gv[i], l3), l2), l1))
                    for p in ((j, k, l), (j, l, k), (k, j, l), (k, l, j),
                              (l, j, k), (l, k, j)):
                        g4[i][p[0]][p[1]][p[2]] = d3
                    if l == k:
                        d2 = jets.real(jets.eps(jets.eps(gv[i], l2), l1))
                        g3[i][j][k] = g3[i][k][j] = d2
                        if k == j:
                            n_mix[i][j] = jets.real(jets.eps(gv[i], l1))
    return SprayData(g_up=g_up, n_mix=n_mix, g3=g3, g4=g4)


def nonlinear_connection_at(space, xc, yc):
    """N^i_j = d(spray)^i/dy^j, generic."""
    n = space.n
    out = [[None] * n for _ in range(n)]
    for j in range(n):
        lvl = jets.fresh_level()
        gv = spray_at(space, xc, jets.seed_component(yc, j, lvl))
        for i in range(n):
            out[i][j] = jets.eps(gv[i], lvl)
    return out


def psi_at(space, xc, yc):
    """K^2 R^i_k generic: the spray-route curvature seed.

    psi^i_k = 2 dG^i/dx^k - dG^i/dy^j dG^j/dy^k - y^j d2G^i/dx^j dy^k
              + 2 G^j d2G^i/dy^k dy^j
    """
    n = space.n
    g0 = spray_at(space, xc, yc)
    dgdx = []
    dgdy = []
    for k in range(n):
        lvl = jets.fresh_level()
        gv = spray_at(space, jets.seed_component(xc, k, lvl), yc)
        dgdx.append([jets.eps(gv[i], lvl) for i in range(n)])
    for j in range(n):
        lvl = jets.fresh_level()
        gv = spray_at(space, xc, jets.seed_component(yc, j, lvl))
        dgdy.append([jets.eps(gv[i], lvl) for i in range(n)])
    d2xy = [[None] * n for _ in range(n)]  # [j][k] -> list over i
    for j in range(n):
        for k in range(n):
            l1 = jets.fresh_level()
            l2 = jets.fresh_level()
            gv = spray_at(space, jets.seed_component(xc, j, l1),
                          jets.seed_component(yc, k, l2))
            d2xy[j][k] = [jets.eps(jets.eps(gv[i], l2), l1)
                          for i in range(n)]
    d2yy = [[None] * n for _ in range(n)]
    for j in range(n):
        for k in range(j, n):
            l1 = jets.fresh_level()
            l2 = jets.fresh_level()
            ys = jets.seed_component(jets.seed_component(yc, j, l1), k, l2)
            gv = spray_at(space, xc, ys)
            col = [jets.eps(jets.eps(gv[i], l2), l1) for i in range(n)]
            d2yy[j][k] = col
            d2yy[k][j] = col
    psi = [[None] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            acc = 2.0 * dgdx[k][i]
            for j in range(n):
                acc = acc - dgdy[j][i] * dgdy[k][j]
                acc = acc - yc[j] * d2xy[j][k][i]
                acc = acc + 2.0 * g0[j] * d2yy[j][k][i]
            psi[i][k] = acc
    return psi


def chern_gamma(space, x, y):
    """Chern-type connection coefficients Gamma^l_jk at a point.

    Gamma^l_jk = 1/2 g^{li} (Dg_ij/Dx^k + Dg_ik/Dx^j - Dg_jk/Dx^i) with
    D/Dx the horizontal derivative d/dx - N^m d/dy^m.  Returns (gamma, N).
    """
    n = space.n
    xf = [float(c) for c in x]
    yf = [float(c) for c in y]
    core = guarded_core(space, xf, yf)
    g_inv = np.array(g_inv_of(core), dtype=float)
    n_mix = np.array([[jets.real(v) for v in row]
                      for row in nonlinear_connection_at(space, xf, yf)])
    dgdx = np.zeros((n, n, n))  # [k][i][j]
    for k in range(n):
        lvl = jets.fresh_level()
        gm = g_mat_of(PDCore(space, jets.seed_component(xf, k, lvl), yf))
        for i in range(n):
            for j in range(i, n):
                val = jets.real(jets.eps(gm[i][j], lvl))
                dgdx[k, i, j] = dgdx[k, j, i] = val
    dgdy = np.zeros((n, n, n))  # [m][i][j]
    for m in range(n):
        lvl = jets.fresh_level()
        gm = g_mat_of(core.reseed(jets.seed_component(yf, m, lvl)))
        for i in range(n):
            for j in range(i, n):
                val = jets.real(jets.eps(gm[i][j], lvl))
                dgdy[m, i, j] = dgdy[m, j, i] = val
    delta_g = dgdx - np.einsum("mk,mij->kij", n_mix, dgdy)
    gamma = np.zeros((n, n, n))
    for l in range(n):
        for j in range(n):
            for k in range(n):
                acc = 0.0
                for i in range(n):
                    acc += g_inv[l, i] * (delta_g[k, i, j] + delta_g[j, i, k]
                                          - delta_g[i, j, k])
                gamma[l, j, k] = 0.5 * acc
    return gamma, n_mix


def hcov_scalar(space, x, y, scalar_fn, n_mix=None):
    """Horizontal covariant derivative S_{|k} of a scalar field of (x, y).

    ``scalar_fn(space, xc, yc)`` must be generic over jets.
    """
    n = space.n
    xf = [float(c) for c in x]
    yf = [float(c) for c in y]
    if n_mix is None:
        n_mix = np.array([[jets.real(v) for v in row]
                          for row in nonlinear_connection_at(space, xf, yf)])
    dsdx = np.zeros(n)
    dsdy = np.zeros(n)
    for k in range(n):
        lvl = jets.fresh_level()
        dsdx[k] = jets.real(jets.eps(
            scalar_fn(space, jets.seed_component(xf, k, lvl), yf), lvl))
        lvl = jets.fresh_level()
        dsdy[k] = jets.real(jets.eps(
            scalar_fn(space, xf, jets.seed_component(yf, k, lvl)), lvl))
    return dsdx - n_mix.T @ dsdy


def geodesic_integrate(space, x0, y0, dt, steps, max_halvings=12):
    """Classical fourth-order Runge-Kutta integration of the geodesic flow
    x'' + 2*spray(x, x') = 0.

    A trajectory started exactly on the axis uses the background spray (the
    continuous extension of the full spray there, exact for Landsberg-type
    spaces); a trajectory started off-axis aborts if it enters the axis
    guard band or leaves the validity box.  Returns a list of states
    (step, parameter, x, y, K).
    """
    n = space.n
    x = np.array([float(c) for c in x0], dtype=float)
    y = np.array([float(c) for c in y0], dtype=float)
    start = pd_scalars(space, x, y)
    axis_mode = start.q <= 10.0 * Q_MIN_FACTOR * start.s

    def rhs(state):
        xs = [float(c) for c in state[:n]]
        ys = [float(c) for c in state[n:]]
        sc = pd_scalars(space, xs, ys)
        if axis_mode:
            if sc.q > 1e-6 * sc.s:
                raise DomainError(
                    "axis-started geodesic left the axis; the spray is "
                    "singular in the surrounding band")
            gv = background_spray_at(space, xs, ys)
        else:
            if sc.q <= Q_MIN_FACTOR * sc.s:
                raise DomainError(
                    "geodesic entered the axis guard band where the spray "
                    "diverges")
            gv = spray_at(space, xs, ys)
        return np.concatenate(
            [state[n:], -2.0 * np.array([jets.real(v) for v in gv])])

    def rk4(state, h):
        s1 = rhs(state)
        s2 = rhs(state + 0.5 * h * s1)
        s3 = rhs(state + 0.5 * h * s2)
        s4 = rhs(state + h * s3)
        return state + (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4)

    k_start = start.K
    states = [(0, 0.0, x.copy(), y.copy(), k_start)]
    state = np.concatenate([x, y])
    t = 0.0
    for step in range(1, steps + 1):
        halvings = 0
        while True:
            sub = 2 ** halvings
            h = dt / sub
            trial = state
            for _ in range(sub):
                trial = rk4(trial, h)
            k_now = pd_scalars(space, trial[:n], trial[n:]).K
            if math.isfinite(k_now) and \
                    abs(k_now - k_start) <= 1e-2 * max(1.0, k_start):
                break
            halvings += 1
            if halvings > max_halvings:
                raise ConvergenceError(
                    f"step rejected after {max_halvings} halvings at "
                    f"parameter {t}")
        state = trial
        t += dt
        for c, (lo, hi) in zip(state[:n], space.domain):
            margin = 0.5 * (hi - lo)
            if c < lo - margin or c > hi + margin:
                raise DomainError(
                    f"geodesic left the validity box at parameter {t}")
        states.append((step, t, state[:n].copy(), state[n:].copy(), k_now))
    return states
