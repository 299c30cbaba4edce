"""Indefinite (time-space signature) pseudo-Finsleroid metric layer: sector
classification of tangent vectors, the metric function F, its fibre metric
and Cartan contraction, and the indicatrix curvature check.

No closed tensor forms exist for this signature in the source catalogue;
the tensor level therefore comes entirely from differentiating F^2 through
the jet layer, with the scalar layer carrying the exact identities.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import jets
from .base_space import SR, sr_split
from .errors import (DomainError, IsotropicBoundaryError, SectorError,
                     SingularDirectionError)

Q_MIN_FACTOR = 1e-8


@dataclass(frozen=True)
class SRParams:
    """Charge-derived constants of the indefinite case.

    g_plus/g_minus are the cone slopes (-g/2 +- h); gp/gm their negative
    reciprocals (g/2 +- h); upper-case variants divide by h.
    """

    g: float
    h: float
    G: float
    g_plus: float
    g_minus: float
    gp: float
    gm: float
    G_plus: float
    G_minus: float
    Gp: float
    Gm: float


def sr_params(g):
    g = float(g)
    h = math.sqrt(1.0 + 0.25 * g * g)
    return SRParams(
        g=g, h=h, G=g / h,
        g_plus=-0.5 * g + h, g_minus=-0.5 * g - h,
        gp=0.5 * g + h, gm=0.5 * g - h,
        G_plus=(-0.5 * g + h) / h, G_minus=(-0.5 * g - h) / h,
        Gp=(0.5 * g + h) / h, Gm=(0.5 * g - h) / h)


class Sector(enum.Enum):
    S_PLUS = "S+"
    SIGMA_PLUS = "Sigma+"
    R_PLUS = "R+"
    R_ZERO = "R0"
    R_MINUS = "R-"
    SIGMA_MINUS = "Sigma-"
    S_MINUS = "S-"


def _require_sr(space):
    if space.signature != SR:
        raise DomainError("operation requires an indefinite-signature space")


def sr_sector(space, x, y):
    """Classify a tangent vector into one of the seven cone sectors.

    Boundary equalities are resolved with tolerance 1e-10 * S, so the seven
    cases partition every nonzero vector.
    """
    _require_sr(space)
    b, q, s = sr_split(space, x, y)
    p = sr_params(space.g_np([float(c) for c in x]))
    tol = 1e-10 * s
    upper = -p.g_minus * q   # = (g/2 + h) q
    lower = -p.g_plus * q    # = (g/2 - h) q
    if abs(b - upper) <= tol:
        return Sector.SIGMA_PLUS
    if b > upper:
        return Sector.S_PLUS
    if abs(b - lower) <= tol:
        return Sector.SIGMA_MINUS
    if b < lower:
        return Sector.S_MINUS
    if abs(b) <= tol:
        return Sector.R_ZERO
    return Sector.R_PLUS if b > 0.0 else Sector.R_MINUS


@dataclass
class SRScalarBundle:
    F: float
    B: float
    L: float
    A: float
    J: float
    b: float
    q: float
    s: float


def sr_metric(space, x, y):
    """Pseudo-Finsleroid metric function and its scalar companions.

    B = (b + g_plus q)(b + g_minus q); evaluation refuses on and near the
    isotropic boundaries where B degenerates.
    """
    _require_sr(space)
    b, q, s = sr_split(space, x, y)
    g = space.g_np([float(c) for c in x])
    p = sr_params(g)
    big_b = b * b - g * q * b - q * q
    if big_b == 0.0 or abs(big_b) < 1e-12 * s * s:
        raise IsotropicBoundaryError(
            f"quadratic form degenerate: B = {big_b!r} at |B| < 1e-12 S^2")
    num = b + p.g_minus * q
    den = b + p.g_plus * q
    jfac = abs(num / den) ** (-0.25 * p.G)
    f_val = math.sqrt(abs(big_b)) * jfac
    return SRScalarBundle(F=f_val, B=big_b, L=q + 0.5 * g * b,
                          A=b - 0.5 * g * q, J=jfac, b=b, q=q, s=s)


def f2_at(space, xc, yc):
    """F^2 generic over jets, valid strictly inside the forward cone:
    F^2 = (b + g_minus q)^(1 - G/2) * (b + g_plus q)^(1 + G/2)."""
    n = space.n
    a = space.a_at(xc)
    bvec = space.b_at(xc)
    g = space.g_at(xc)
    b = sum(bvec[i] * yc[i] for i in range(n))
    ayy = sum(a[i][j] * yc[i] * yc[j] for i in range(n) for j in range(n))
    q2 = b * b - ayy
    q = jets.sqrt(q2)
    h = jets.sqrt(1.0 + 0.25 * g * g)
    big_g = g / h
    base_minus = b + (-0.5 * g - h) * q
    base_plus = b + (-0.5 * g + h) * q
    return (jets.exp((1.0 - 0.5 * big_g) * jets.log(base_minus))
            * jets.exp((1.0 + 0.5 * big_g) * jets.log(base_plus)))


def _require_forward(space, x, y):
    sector = sr_sector(space, x, y)
    if sector is not Sector.S_PLUS:
        raise SectorError(
            f"tensor-level evaluation restricted to the forward cone; "
            f"vector classified {sector.value}")
    b, q, s = sr_split(space, x, y)
    if q <= Q_MIN_FACTOR * s:
        raise SingularDirectionError(
            f"direction within the axis guard band: q = {q:.3e}")
    return b, q, s


@dataclass
class SRTensorBundle:
    g_mat: np.ndarray
    g_inv: np.ndarray
    eigenvalues: np.ndarray
    cartan: np.ndarray
    a_low: np.ndarray
    a_contract: float      # A_h A^h (expected -N^2 g^2 / 4)
    metric_asymmetry: float


def sr_tensors(space, x, y):
    """Fibre metric g_ij = 1/2 d^2 F^2/dy dy via jets, its signature, and
    the Cartan contraction."""
    _require_forward(space, x, y)
    n = space.n
    xf = [float(c) for c in x]
    yf = [float(c) for c in y]
    raw = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            raw[i, j] = raw[j, i] = 0.5 * jets.derive_y(
                lambda xs, ys: f2_at(space, xs, ys), xf, yf, (i, j))
    asym = float(np.max(np.abs(raw - raw.T)))
    g_mat = 0.5 * (raw + raw.T)
    g_inv = np.linalg.inv(g_mat)
    f_val = sr_metric(space, xf, yf).F
    cart = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i, n):
            for m in range(j, n):
                val = 0.25 * f_val * jets.derive_y(
                    lambda xs, ys: f2_at(space, xs, ys), xf, yf, (i, j, m))
                for p in ((i, j, m), (i, m, j), (j, i, m), (j, m, i),
                          (m, i, j), (m, j, i)):
                    cart[p] = val
    a_low = np.einsum("jk,ijk->i", g_inv, cart)
    a_contract = float(a_low @ g_inv @ a_low)
    return SRTensorBundle(
        g_mat=g_mat, g_inv=g_inv,
        eigenvalues=np.linalg.eigvalsh(g_mat),
        cartan=cart, a_low=a_low, a_contract=a_contract,
        metric_asymmetry=asym)


def sr_indicatrix_curvature(space, x, y):
    """Indicatrix curvature from the jet-computed Cartan tensor.

    Returns (s_star, curvature, residual); the expected constant is
    s_star = g^2/4, curvature = -(1 + g^2/4).
    """
    bundle = sr_tensors(space, x, y)
    f2 = sr_metric(space, x, y).F ** 2
    yv = np.array([float(c) for c in y])
    y_low = bundle.g_mat @ yv
    h_mat = bundle.g_mat - np.outer(y_low, y_low) / f2
    cart_mix = np.einsum("jh,ihn->ijn", bundle.g_inv, bundle.cartan)
    rhat_mix = (np.einsum("hjm,ihn->ijmn", cart_mix, cart_mix)
                - np.einsum("hjn,ihm->ijmn", cart_mix, cart_mix)) / f2
    rhat = np.einsum("jl,ilmn->ijmn", bundle.g_mat, rhat_mix)
    pattern = (np.einsum("im,jn->ijmn", h_mat, h_mat)
               - np.einsum("in,jm->ijmn", h_mat, h_mat)) / f2
    denom = float(np.sum(pattern * pattern))
    s_star = float(np.sum(rhat * pattern) / denom) if denom > 0 else 0.0
    scale = max(float(np.max(np.abs(pattern))), 1e-30)
    residual = float(np.max(np.abs(rhat - s_star * pattern))) / scale
    return s_star, -(1.0 + s_star), residual
