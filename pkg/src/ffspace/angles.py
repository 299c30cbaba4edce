"""Scalar product, angle, and distance for both signatures, plus a discrete
geodesic arc-length oracle on the indicatrix validating the angle formula.

The angle formulas are manifestly symmetric; arguments are canonicalized
(lexicographic order) before evaluation so swapped calls return bitwise
identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .base_space import PD
from .errors import (ConvergenceError, DomainError, FormulaDomainError,
                     SectorError)
from .finsleroid_pd import pd_scalars, pd_params
from .finsleroid_sr import Sector, sr_metric, sr_params, sr_sector

CLAMP_SLACK = 1e-12


@dataclass
class AnglePair:
    angle: float
    product: float
    distance: float


def _canonical(y1, y2):
    a = [float(c) for c in y1]
    b = [float(c) for c in y2]
    return (b, a) if b < a else (a, b)


def _clamped_acos(arg):
    if arg > 1.0 + CLAMP_SLACK or arg < -1.0 - CLAMP_SLACK:
        raise FormulaDomainError(
            f"angle-formula argument {arg!r} outside [-1, 1] beyond "
            "rounding slack")
    return math.acos(min(1.0, max(-1.0, arg)))


def _clamped_acosh(arg):
    if arg < 1.0 - CLAMP_SLACK:
        raise FormulaDomainError(
            f"hyperbolic-angle argument {arg!r} below 1 beyond rounding "
            "slack")
    return math.acosh(max(1.0, arg))


def _r_product(space, x, y1, y2):
    xf = [float(c) for c in x]
    a = space.a_np(xf)
    bvec = space.b_np(xf)
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    if space.signature == PD:
        return float(y1 @ a @ y2) - float(bvec @ y1) * float(bvec @ y2)
    return float(bvec @ y1) * float(bvec @ y2) - float(y1 @ a @ y2)


def pd_angle(space, x, y1, y2):
    """Angle, scalar product and distance between two tangent vectors."""
    y1, y2 = _canonical(y1, y2)
    s1 = pd_scalars(space, x, y1)
    s2 = pd_scalars(space, x, y2)
    p = pd_params(space.g_np([float(c) for c in x]))
    arg = (s1.A * s2.A + p.h * p.h * _r_product(space, x, y1, y2)) \
        / (math.sqrt(s1.B) * math.sqrt(s2.B))
    angle = _clamped_acos(arg) / p.h
    product = s1.K * s2.K * math.cos(angle)
    dist2 = s1.K ** 2 + s2.K ** 2 - 2.0 * product
    return AnglePair(angle=angle, product=product,
                     distance=math.sqrt(max(dist2, 0.0)))


def pd_axis_angle(space, x, y):
    """Angle between a vector and the distinguished axis."""
    s = pd_scalars(space, x, y)
    p = pd_params(space.g_np([float(c) for c in x]))
    return _clamped_acos(s.A / math.sqrt(s.B)) / p.h


def sr_angle(space, x, y1, y2):
    """Hyperbolic angle layer for forward-cone vectors."""
    for label, y in (("first", y1), ("second", y2)):
        sector = sr_sector(space, x, y)
        if sector is not Sector.S_PLUS:
            raise SectorError(
                f"{label} argument outside the forward cone (classified "
                f"{sector.value})")
    y1, y2 = _canonical(y1, y2)
    m1 = sr_metric(space, x, y1)
    m2 = sr_metric(space, x, y2)
    p = sr_params(space.g_np([float(c) for c in x]))
    arg = (m1.A * m2.A - p.h * p.h * _r_product(space, x, y1, y2)) \
        / (math.sqrt(abs(m1.B)) * math.sqrt(abs(m2.B)))
    angle = _clamped_acosh(arg) / p.h
    product = m1.F * m2.F * math.cosh(angle)
    dist2 = m1.F ** 2 + m2.F ** 2 - 2.0 * product
    return AnglePair(angle=angle, product=product,
                     distance=math.copysign(math.sqrt(abs(dist2)), dist2))


def sr_axis_angle(space, x, y):
    sector = sr_sector(space, x, y)
    if sector is not Sector.S_PLUS:
        raise SectorError(
            f"axis angle defined in the forward cone only (classified "
            f"{sector.value})")
    m = sr_metric(space, x, y)
    p = sr_params(space.g_np([float(c) for c in x]))
    return _clamped_acosh(m.A / math.sqrt(abs(m.B))) / p.h


# -- indicatrix arc-length oracle ----------------------------------------------

class _PointMetric:
    """Vectorized metric-layer evaluator at a fixed base point (PD)."""

    def __init__(self, space, x):
        xf = [float(c) for c in x]
        self.n = space.n
        self.a = space.a_np(xf)
        self.bvec = space.b_np(xf)
        self.g = space.g_np(xf)
        p = pd_params(self.g)
        self.h = p.h
        self.G = p.G

    def scalars(self, ys):
        u = ys @ self.a
        b = ys @ self.bvec
        s2 = np.einsum("mi,mi->m", u, ys)
        q2 = np.maximum(s2 - b * b, 0.0)
        q = np.sqrt(q2)
        big_b = b * b + self.g * q * b + q2
        ell = q + 0.5 * self.g * b
        phi = math.atan(0.5 * self.G) + np.arctan2(self.h * b, ell)
        jfac = np.exp(0.5 * self.G * phi)
        k2 = big_b * jfac * jfac
        return u, b, q, q2, s2, big_b, k2

    def k_of(self, ys):
        return np.sqrt(self.scalars(ys)[6])

    def y_low(self, ys):
        u, b, q, q2, s2, big_b, k2 = self.scalars(ys)
        return (u + (self.g * q)[:, None] * self.bvec) * (k2 / big_b)[:, None]

    def g_mat(self, ys):
        u, b, q, q2, s2, big_b, k2 = self.scalars(ys)
        kb = (k2 / big_b)[:, None, None]
        gq = self.g / big_b
        c_bb = (gq * (self.g * q2 - b * s2 / q))[:, None, None]
        c_uu = (gq * (-b / q))[:, None, None]
        c_bu = (gq * (s2 / q))[:, None, None]
        bb = np.einsum("i,j->ij", self.bvec, self.bvec)[None, :, :]
        uu = np.einsum("mi,mj->mij", u, u)
        bu = (np.einsum("i,mj->mij", self.bvec, u)
              + np.einsum("mi,j->mij", u, self.bvec))
        return (self.a[None, :, :] + c_bb * bb + c_uu * uu + c_bu * bu) * kb

    def cartan(self, ys):
        u, b, q, q2, s2, big_b, k2 = self.scalars(ys)
        gm = self.g_mat(ys)
        yl = self.y_low(ys)
        hm = gm - np.einsum("mi,mj->mij", yl, yl) / k2[:, None, None]
        k = np.sqrt(k2)
        w = (self.n * k / (2.0 * q))[:, None] * (
            self.bvec[None, :] - (b / k2)[:, None] * yl)
        c3 = 4.0 / (self.n * self.n)
        return (self.g / self.n) * (
            np.einsum("mij,mk->mijk", hm, w)
            + np.einsum("mik,mj->mijk", hm, w)
            + np.einsum("mjk,mi->mijk", hm, w)
            - c3 * np.einsum("mi,mj,mk->mijk", w, w, w))


def indicatrix_arc_oracle(space, x, y1, y2, steps=512, grad_tol=1e-7,
                          max_iter=3000):
    """Geodesic arc length on the unit level set of K between the rays of
    y1 and y2, by discrete energy relaxation.

    Independent oracle for the closed angle formula: the path starts as the
    radially projected straight segment and relaxes under the induced
    metric; returns the polygonal length.  Raises ConvergenceError if the
    relaxation stalls above its gradient target.
    """
    if space.signature != PD:
        raise DomainError("arc oracle requires a positive-definite space")
    y1, y2 = _canonical(y1, y2)
    pm = _PointMetric(space, x)
    n = pm.n
    v1 = np.asarray(y1, dtype=float)
    v2 = np.asarray(y2, dtype=float)
    cross = np.outer(v1, v2) - np.outer(v2, v1)
    if np.max(np.abs(cross)) < 1e-12 * np.linalg.norm(v1) \
            * np.linalg.norm(v2):
        raise DomainError("arc oracle requires non-parallel vectors")
    ends = np.stack([v1, v2])
    ends /= pm.k_of(ends)[:, None]
    ts = np.linspace(0.0, 1.0, steps + 1)[1:-1, None]
    inner = ends[0] * (1.0 - ts) + ends[1] * ts
    inner /= pm.k_of(inner)[:, None]

    def path_of(u_flat):
        u = u_flat.reshape(-1, n)
        k = pm.k_of(u)
        return np.vstack([ends[0], u / k[:, None], ends[1]]), u, k

    def energy(u_flat):
        path, u, k = path_of(u_flat)
        deltas = np.diff(path, axis=0)
        mids = path[:-1] + path[1:]
        gm = pm.g_mat(mids)
        e = float(np.einsum("mij,mi,mj->", gm, deltas, deltas))
        # gradient wrt the path points, then chain through the radial
        # projection point = u / K(u)
        dgdy = 2.0 * pm.cartan(mids) / pm.k_of(mids)[:, None, None, None]
        seg_y = np.einsum("mijc,mi,mj->mc", dgdy, deltas, deltas)
        seg_d = 2.0 * np.einsum("mij,mj->mi", gm, deltas)
        grad_p = np.zeros_like(path)
        grad_p[:-1] += seg_y - seg_d
        grad_p[1:] += seg_y + seg_d
        grad_inner = grad_p[1:-1]
        yl = pm.y_low(u)
        jac = (np.eye(n)[None, :, :] / k[:, None, None]
               - np.einsum("ma,mc->mac", u, yl)
               / (k ** 3)[:, None, None])
        grad_u = np.einsum("mac,ma->mc", jac, grad_inner)
        return e, grad_u.ravel()

    res = minimize(energy, inner.ravel(), jac=True, method="L-BFGS-B",
                   options={"maxiter": max_iter, "ftol": 1e-16,
                            "gtol": grad_tol})
    gnorm = float(np.max(np.abs(res.jac)))
    if not res.success and gnorm > 100.0 * grad_tol:
        raise ConvergenceError(
            f"indicatrix relaxation stalled: |grad| = {gnorm:.3e} after "
            f"{res.nit} iterations")
    path, _, _ = path_of(res.x)
    deltas = np.diff(path, axis=0)
    mids = path[:-1] + path[1:]
    gm = pm.g_mat(mids)
    seg = np.sqrt(np.maximum(
        np.einsum("mij,mi,mj->m", gm, deltas, deltas), 0.0))
    return float(np.sum(seg))
