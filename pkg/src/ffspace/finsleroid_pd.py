"""Positive-definite Finsleroid metric layer.

The metric function K and every distinguished tensor come in two routes:
closed algebraic forms (the primary outputs) and raw differentiation of K^2
through the jet layer (the oracle).  Both routes share the generic scalar
core below, which works on floats and jets alike so the curvature layer can
differentiate any closed form in x or y.

All tensor-level objects diverge like 1/q toward the axis; operations that
need them refuse inside the guard band q <= Q_MIN_FACTOR * S, while the
scalar layer stays evaluable there (K itself is continuous across the axis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import jets
from .base_space import PD
from .errors import DefinitionError, DomainError, SingularDirectionError

Q_MIN_FACTOR = 1e-8


@dataclass(frozen=True)
class PDParams:
    """Charge-derived constants of the positive-definite case."""

    g: float
    h: float
    G: float
    g_plus: float
    g_minus: float


def pd_params(g):
    g = float(g)
    if not -2.0 < g < 2.0:
        raise DefinitionError(f"charge must lie in (-2, 2), got {g}")
    h = math.sqrt(1.0 - 0.25 * g * g)
    return PDParams(g=g, h=h, G=g / h, g_plus=0.5 * g + h, g_minus=0.5 * g - h)


@dataclass
class PDScalarBundle:
    b: float
    q: float
    s: float
    B: float
    L: float
    A: float
    phi: float
    J: float
    K: float


@dataclass
class PDTensorBundle:
    y_low: np.ndarray      # y_i
    g_mat: np.ndarray      # g_ij
    g_inv: np.ndarray      # g^ij
    det_g: float
    h_mat: np.ndarray      # angular metric h_ij
    cartan: np.ndarray     # A_ijk
    a_low: np.ndarray      # A_i
    a_up: np.ndarray       # A^i
    h_len: np.ndarray      # lengthened angular metric H_ij
    h_len_mix: np.ndarray  # H_i^j
    tau: np.ndarray        # tau_ij
    tau4: np.ndarray       # tau_ijmn
    metric_oracle_gap: float  # closed-form g_ij vs half Hessian of K^2
    metric_asymmetry: float   # asymmetry norm of the differentiated Hessian


class PDCore:
    """Shared scalar/vector ingredients at one (x, y), generic over jets."""

    __slots__ = ("n", "g", "h", "G", "a", "a_inv", "bvec", "y", "u",
                 "b", "q", "q2", "s2", "B", "K2", "K", "J", "phi", "L", "A",
                 "v_low", "KB")

    def __init__(self, space, xc, yc, floor_q2=False):
        self.n = space.n
        self.a = space.a_at(xc)
        self.bvec = space.b_at(xc)
        self.g = space.g_at(xc)
        self.a_inv = None  # filled on demand
        self._set_y(yc, floor_q2)

    def _set_y(self, yc, floor_q2=False):
        n = self.n
        a, bvec, g = self.a, self.bvec, self.g
        self.y = list(yc)
        self.u = [sum(a[i][j] * yc[j] for j in range(n)) for i in range(n)]
        self.b = sum(bvec[i] * yc[i] for i in range(n))
        self.s2 = sum(self.u[i] * yc[i] for i in range(n))
        q2 = self.s2 - self.b * self.b
        if floor_q2 and not isinstance(q2, jets.Jet):
            scale = jets.real(self.s2)
            if q2 < 0.0:
                if q2 < -1e-12 * max(scale, 1.0):
                    raise DefinitionError(
                        f"r-quadratic form negative ({q2}); space data "
                        "inconsistent")
                q2 = 0.0
        self.q2 = q2
        self.q = jets.sqrt(q2)
        h = jets.sqrt(1.0 - 0.25 * g * g)
        self.h = h
        self.G = g / h
        self.B = self.b * self.b + g * self.q * self.b + q2
        self.L = self.q + 0.5 * g * self.b
        self.A = self.b + 0.5 * g * self.q
        # single smooth branch: equals the published b>=0 / b<=0 arctan
        # forms and their common limit at b = 0
        self.phi = jets.atan(0.5 * self.G) + jets.atan2(h * self.b, self.L)
        self.J = jets.exp(0.5 * self.G * self.phi)
        self.K2 = self.B * self.J * self.J
        self.K = jets.sqrt(self.B) * self.J
        self.v_low = [self.u[i] - self.b * bvec[i] for i in range(n)]
        self.KB = self.K2 / self.B

    def reseed(self, yc):
        """Same base point and coefficients, new (possibly jet) y."""
        fresh = PDCore.__new__(PDCore)
        fresh.n = self.n
        fresh.a = self.a
        fresh.bvec = self.bvec
        fresh.g = self.g
        fresh.a_inv = self.a_inv
        fresh._set_y(yc)
        return fresh

    def inv_a(self):
        if self.a_inv is None:
            self.a_inv = jets.mat_inverse(self.a)
        return self.a_inv

    def bup(self):
        a_inv = self.inv_a()
        n = self.n
        return [sum(a_inv[i][j] * self.bvec[j] for j in range(n))
                for i in range(n)]

    def vup(self):
        b_up = self.bup()
        return [self.y[i] - self.b * b_up[i] for i in range(self.n)]

    def r_low(self):
        n = self.n
        return [[self.a[i][j] - self.bvec[i] * self.bvec[j] for j in range(n)]
                for i in range(n)]


def k2_at(space, xc, yc):
    """K^2 as a generic scalar; the field every oracle differentiates."""
    return PDCore(space, xc, yc, floor_q2=True).K2


# -- closed-form assemblies (generic over floats and jets) --------------------

def y_low_of(core):
    """Covariant tangent vector."""
    gq = core.g * core.q
    return [(core.u[i] + gq * core.bvec[i]) * core.KB
            for i in range(core.n)]


def g_mat_of(core):
    """Metric tensor."""
    n = core.n
    g, b, q, s2, B = core.g, core.b, core.q, core.s2, core.B
    c_bb = g * q * q - b * s2 / q
    c_uu = -b / q
    c_bu = s2 / q
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        bi, ui = core.bvec[i], core.u[i]
        for j in range(i, n):
            bj, uj = core.bvec[j], core.u[j]
            val = (core.a[i][j] + (g / B) * (
                c_bb * bi * bj + c_uu * ui * uj + c_bu * (bi * uj + bj * ui)
            )) * core.KB
            out[i][j] = val
            out[j][i] = val
    return out


def g_inv_of(core):
    """Reciprocal metric tensor."""
    n = core.n
    g, b, q, B = core.g, core.b, core.q, core.B
    a_inv = core.inv_a()
    b_up = core.bup()
    y = core.y
    c_yy = (g / (B * q)) * (b + g * q)
    gq = g / q
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            val = (a_inv[i][j]
                   + gq * (b * b_up[i] * b_up[j]
                           - b_up[i] * y[j] - b_up[j] * y[i])
                   + c_yy * y[i] * y[j]) / core.KB
            out[i][j] = val
            out[j][i] = val
    return out


def w_vec_of(core):
    """w_i with A_i = g * w_i; keeps the Cartan algebra regular at g = 0."""
    y_low = y_low_of(core)
    c = core.n * core.K / (2.0 * core.q)
    return [c * (core.bvec[i] - core.b * y_low[i] / core.K2)
            for i in range(core.n)]


def a_low_of(core):
    w = w_vec_of(core)
    return [core.g * wi for wi in w]


def a_up_of(core):
    b_up = core.bup()
    c = core.n * core.g / (2.0 * core.q * core.K)
    return [c * (core.B * b_up[i] - (core.b + core.g * core.q) * core.y[i])
            for i in range(core.n)]


def h_mat_of(core, g_mat=None):
    n = core.n
    if g_mat is None:
        g_mat = g_mat_of(core)
    y_low = y_low_of(core)
    return [[g_mat[i][j] - y_low[i] * y_low[j] / core.K2 for j in range(n)]
            for i in range(n)]


def h_len_of(core):
    """Lengthened angular metric H_ij = (r_ij - v_i v_j / q^2) K^2/B."""
    n = core.n
    r = core.r_low()
    v = core.v_low
    return [[(r[i][j] - v[i] * v[j] / core.q2) * core.KB for j in range(n)]
            for i in range(n)]


def h_len_mix_of(core):
    """H_i^j = r_i^j - v_i v^j / q^2; charge-independent."""
    n = core.n
    b_up = core.bup()
    v_up = core.vup()
    v = core.v_low
    return [[(1.0 if i == j else 0.0) - core.bvec[i] * b_up[j]
             - v[i] * v_up[j] / core.q2 for j in range(n)]
            for i in range(n)]


def cartan_of(core, h_mat=None):
    """Cartan tensor in its special algebraic form, regularized at g = 0."""
    n = core.n
    if h_mat is None:
        h_mat = h_mat_of(core)
    w = w_vec_of(core)
    g = core.g
    c3 = 4.0 / (n * n)
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                val = (g / n) * (h_mat[i][j] * w[k] + h_mat[i][k] * w[j]
                                 + h_mat[j][k] * w[i]
                                 - c3 * w[i] * w[j] * w[k])
                for p in ((i, j, k), (i, k, j), (j, i, k), (j, k, i),
                          (k, i, j), (k, j, i)):
                    out[p[0]][p[1]][p[2]] = val
    return out


def tau_of(core, h_len=None):
    n = core.n
    if h_len is None:
        h_len = h_len_of(core)
    c = -(n / 4.0) * core.g * (2.0 * core.b + core.g * core.q) / core.q
    return [[c * h_len[i][j] for j in range(n)] for i in range(n)]


def tau4_of(core, h_len=None):
    n = core.n
    if h_len is None:
        h_len = h_len_of(core)
    c = -core.g * (2.0 * core.b + core.g * core.q) / (4.0 * core.q)
    return [[[[c * (h_len[i][j] * h_len[m][k] + h_len[i][m] * h_len[j][k]
                    + h_len[i][k] * h_len[j][m])
               for k in range(n)] for m in range(n)] for j in range(n)]
            for i in range(n)]


def a_mixed_of(core):
    """A_ij := K dA_i/dy^j + l_i A_j (assembled from the closed A_i)."""
    n = core.n
    out = np.zeros((n, n))
    y_low = np.array([float(v) for v in y_low_of(core)])
    a_low = np.array([float(v) for v in a_low_of(core)])
    K = float(core.K)
    for j in range(n):
        lvl = jets.fresh_level()
        da = a_low_of(core.reseed(jets.seed_component(core.y, j, lvl)))
        for i in range(n):
            out[i, j] = K * jets.real(jets.eps(da[i], lvl)) \
                + (y_low[i] / K) * a_low[j]
    return out


# -- public operations --------------------------------------------------------

def _require_pd(space):
    if space.signature != PD:
        raise DomainError("operation requires a positive-definite space")


def _float_xy(space, x, y):
    xf = [float(c) for c in x]
    yf = [float(c) for c in y]
    if not any(yf):
        raise DomainError("zero tangent vector")
    return xf, yf


def pd_scalars(space, x, y):
    """Scalar ingredients (b, q, S, B, L, A, Phi, J, K) at (x, y).

    Evaluable everywhere off y = 0, including the axis q = 0 where the
    common arctan limit is taken automatically by the smooth branch.
    """
    _require_pd(space)
    xf, yf = _float_xy(space, x, y)
    core = PDCore(space, xf, yf, floor_q2=True)
    return PDScalarBundle(
        b=float(core.b), q=float(core.q), s=math.sqrt(float(core.s2)),
        B=float(core.B), L=float(core.L), A=float(core.A),
        phi=float(core.phi), J=float(core.J), K=float(core.K))


def phi_branch(space, x, y, branch):
    """The two published arctan branches of Phi; test oracle for the smooth
    implementation.  branch is 'plus' (b >= 0) or 'minus' (b <= 0)."""
    _require_pd(space)
    xf, yf = _float_xy(space, x, y)
    core = PDCore(space, xf, yf, floor_q2=True)
    G, h, b, L = float(core.G), float(core.h), float(core.b), float(core.L)
    tail = math.atan(0.5 * G) - math.atan(L / (h * b))
    if branch == "plus":
        return math.pi / 2.0 + tail
    if branch == "minus":
        return -math.pi / 2.0 + tail
    raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


def guarded_core(space, x, y):
    """Float core with the b-slit guard enforced."""
    xf, yf = _float_xy(space, x, y)
    core = PDCore(space, xf, yf, floor_q2=True)
    q = float(core.q)
    s = math.sqrt(float(core.s2))
    if q <= Q_MIN_FACTOR * s:
        raise SingularDirectionError(
            f"direction within the axis guard band: q = {q:.3e} <= "
            f"{Q_MIN_FACTOR:g} * S = {Q_MIN_FACTOR * s:.3e}")
    return core


def metric_hessian(space, x, y):
    """Half the y-Hessian of K^2 through the jet layer (oracle route).

    Returns (matrix, asymmetry_norm); the matrix is symmetrized, the norm
    reports how far the raw evaluation was from symmetric.
    """
    n = space.n
    xf = [float(c) for c in x]
    yf = [float(c) for c in y]
    raw = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            raw[i, j] = raw[j, i] = 0.5 * jets.derive_y(
                lambda xs, ys: k2_at(space, xs, ys), xf, yf, (i, j))
    asym = float(np.max(np.abs(raw - raw.T)))
    return 0.5 * (raw + raw.T), asym


def cartan_jets(space, x, y):
    """A_ijk = (K/4) d^3 K^2 / dy^i dy^j dy^k via the jet layer."""
    n = space.n
    xf = [float(c) for c in x]
    yf = [float(c) for c in y]
    k = pd_scalars(space, xf, yf).K
    out = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i, n):
            for m in range(j, n):
                val = 0.25 * k * jets.derive_y(
                    lambda xs, ys: k2_at(space, xs, ys), xf, yf, (i, j, m))
                for p in ((i, j, m), (i, m, j), (j, i, m), (j, m, i),
                          (m, i, j), (m, j, i)):
                    out[p] = val
    return out


def _nparr(nested):
    return np.array(nested, dtype=float)


def pd_tensors(space, x, y, oracle=True):
    """Closed-form tensor bundle at (x, y), cross-checked against the raw
    Hessian of K^2 when ``oracle`` is set."""
    _require_pd(space)
    core = guarded_core(space, x, y)
    y_low = _nparr(y_low_of(core))
    g_mat = _nparr(g_mat_of(core))
    h_len = h_len_of(core)
    bundle = PDTensorBundle(
        y_low=y_low,
        g_mat=g_mat,
        g_inv=_nparr(g_inv_of(core)),
        det_g=float(np.linalg.det(g_mat)),
        h_mat=g_mat - np.outer(y_low, y_low) / float(core.K2),
        cartan=_nparr(cartan_of(core)),
        a_low=_nparr(a_low_of(core)),
        a_up=_nparr(a_up_of(core)),
        h_len=_nparr(h_len),
        h_len_mix=_nparr(h_len_mix_of(core)),
        tau=_nparr(tau_of(core, h_len)),
        tau4=_nparr(tau4_of(core, h_len)),
        metric_oracle_gap=0.0,
        metric_asymmetry=0.0,
    )
    if oracle:
        hess, asym = metric_hessian(space, list(x), list(y))
        scale = max(float(np.max(np.abs(g_mat))), 1e-30)
        bundle.metric_oracle_gap = float(
            np.max(np.abs(hess - g_mat)) / scale)
        bundle.metric_asymmetry = asym
    return bundle


def pd_cartan(space, x, y):
    """Cartan layer: jet-route A_ijk plus closed forms and the residual of
    the special algebraic reconstruction.

    Returns (cartan_jets, a_low, a_up, h_len, tau, tau4, residuals) where
    ``residuals`` maps check names to max-abs gaps.
    """
    _require_pd(space)
    core = guarded_core(space, x, y)
    n = space.n
    cart_jet = cartan_jets(space, list(x), list(y))
    cart_closed = _nparr(cartan_of(core))
    h_len = h_len_of(core)
    tau_closed = _nparr(tau_of(core, h_len))
    tau4_closed = _nparr(tau4_of(core, h_len))
    tau_def, tau4_def = tau_definition(space, x, y, core=core)
    a_low = _nparr(a_low_of(core))
    a_up = _nparr(a_up_of(core))
    ah = float(a_low @ a_up)
    residuals = {
        "cartan-structure": float(np.max(np.abs(cart_jet - cart_closed))),
        "cartan-contraction": abs(ah - (n * n / 4.0) * float(core.g) ** 2),
        "tau": float(np.max(np.abs(tau_def - tau_closed))),
        "tau4": float(np.max(np.abs(tau4_def - tau4_closed))),
    }
    return (cart_jet, a_low, a_up, _nparr(h_len), tau_closed, tau4_closed,
            residuals)


def tau_definition(space, x, y, core=None):
    """tau_ij / tau_ijmn from their defining combinations (jet-assisted),
    for comparison against the closed forms."""
    _require_pd(space)
    if core is None:
        core = guarded_core(space, x, y)
    n = space.n
    K = float(core.K)
    g_inv = _nparr(g_inv_of(core))
    y_low = _nparr(y_low_of(core))
    a_low = _nparr(a_low_of(core))
    cart = _nparr(cartan_of(core))
    a_mixed = a_mixed_of(core)
    cart_mix = np.einsum("kh,ihj->ikj", g_inv, cart)   # A_i^k_j
    tau = a_mixed - np.einsum("k,ikj->ij", a_low, cart_mix)

    dcart = np.zeros((n, n, n, n))  # [i][j][m][l] = dA_jml/dy^i
    for i in range(n):
        lvl = jets.fresh_level()
        c2 = cartan_of(core.reseed(jets.seed_component(core.y, i, lvl)))
        for j in range(n):
            for m in range(n):
                for l in range(n):
                    dcart[i, j, m, l] = jets.real(jets.eps(c2[j][m][l], lvl))
    cart_up3 = np.einsum("hk,ijk->ijh", g_inv, cart)   # A_ij^h
    ell = y_low / K
    tau4 = (K * dcart
            - np.einsum("ijh,hmn->ijmn", cart_up3, cart)
            - np.einsum("imh,hjn->ijmn", cart_up3, cart)
            - np.einsum("inh,hjm->ijmn", cart_up3, cart)
            + np.einsum("j,imn->ijmn", ell, cart)
            + np.einsum("m,ijn->ijmn", ell, cart)
            + np.einsum("n,ijm->ijmn", ell, cart))
    return tau, tau4


def indicatrix_curvature(space, x, y):
    """Indicatrix curvature tensor from the Cartan tensor, its constant-
    curvature fit, and the structure residual (scaled by the pattern size).

    Returns (rhat_ijmn, s_star, curvature, residual).
    """
    _require_pd(space)
    core = guarded_core(space, x, y)
    K2 = float(core.K2)
    g_inv = _nparr(g_inv_of(core))
    g_mat = _nparr(g_mat_of(core))
    cart = _nparr(cartan_of(core))
    h_mat = _nparr(h_mat_of(core))
    cart_mix = np.einsum("jh,ihn->ijn", g_inv, cart)   # A_i^j_n
    rhat_mix = (np.einsum("hjm,ihn->ijmn", cart_mix, cart_mix)
                - np.einsum("hjn,ihm->ijmn", cart_mix, cart_mix)) / K2
    rhat = np.einsum("jl,ilmn->ijmn", g_mat, rhat_mix)
    pattern = (np.einsum("im,jn->ijmn", h_mat, h_mat)
               - np.einsum("in,jm->ijmn", h_mat, h_mat)) / K2
    denom = float(np.sum(pattern * pattern))
    s_star = float(np.sum(rhat * pattern) / denom) if denom > 0 else 0.0
    scale = max(float(np.max(np.abs(pattern))), 1e-30)
    residual = float(np.max(np.abs(rhat - s_star * pattern))) / scale
    return rhat, s_star, 1.0 + s_star, residual
