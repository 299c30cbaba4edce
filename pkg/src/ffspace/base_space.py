"""Associated (pseudo-)Riemannian space: metric coefficients, axis 1-form,
charge field, Christoffel symbols, nabla_b and the curvature tensor of the
background metric.

Index conventions are documented in docs/curvature_conventions.md; the
background curvature array ``riemann[n][i][k][m]`` is laid out so that the
axis-contraction identity ``b_j riemann[n][j][k][m] = ktilde_m r_nk -
ktilde_k r_nm`` holds on every warped example, and so that the spray-route
curvature of the full metric reduces to it when the charge vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import DefinitionError, DomainError
from .exprlang import evaluate

PD = "pd"
SR = "sr"


@dataclass(frozen=True)
class SpaceDefinition:
    """A space: dimension, signature, and coefficient expressions."""

    n: int
    signature: str
    metric: tuple  # n x n tuple of ExprAst, symmetric by construction
    oneform: tuple  # n ExprAst
    charge: object  # ExprAst
    name: str = "unnamed"
    domain: tuple = ()  # per-coordinate (lo, hi) validity box
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 3:
            raise DefinitionError(
                f"dimension must be at least 3, got {self.n}")
        if self.signature not in (PD, SR):
            raise DefinitionError(
                f"signature must be '{PD}' or '{SR}', got {self.signature!r}")
        if not self.domain:
            object.__setattr__(
                self, "domain", tuple((-1.0, 1.0) for _ in range(self.n)))

    # generic evaluation (floats or jets) ------------------------------------

    def a_at(self, xc):
        return [[evaluate(self.metric[i][j], xc) for j in range(self.n)]
                for i in range(self.n)]

    def b_at(self, xc):
        return [evaluate(self.oneform[i], xc) for i in range(self.n)]

    def g_at(self, xc):
        return evaluate(self.charge, xc)

    def r_at(self, xc):
        """r_ij = a_ij - b_i b_j (PD) or b_i b_j - a_ij (SR)."""
        a = self.a_at(xc)
        b = self.b_at(xc)
        if self.signature == PD:
            return [[a[i][j] - b[i] * b[j] for j in range(self.n)]
                    for i in range(self.n)]
        return [[b[i] * b[j] - a[i][j] for j in range(self.n)]
                for i in range(self.n)]

    # float fast paths --------------------------------------------------------

    def a_np(self, x):
        return np.array(self.a_at(list(x)), dtype=float)

    def b_np(self, x):
        return np.array(self.b_at(list(x)), dtype=float)

    def g_np(self, x):
        return float(self.g_at(list(x)))

    def domain_center(self):
        return np.array([(lo + hi) / 2.0 for lo, hi in self.domain])


@dataclass
class BasePointData:
    a: np.ndarray
    a_inv: np.ndarray
    det_a: float
    christoffel: np.ndarray  # [k][i][j] symmetric in (i, j)
    nabla_b: np.ndarray      # nabla_b[i][j] = nabla_i b_j
    riemann: np.ndarray      # [n][i][k][m], see module docstring
    grad_g: np.ndarray


def christoffel_at(space, xc):
    """Christoffel symbols of the background metric, generic over jets.

    gamma[k][i][j] = 1/2 a^{kn} (d_j a_ni + d_i a_nj - d_n a_ij)
    """
    n = space.n
    a = space.a_at(xc)
    a_inv = jets.mat_inverse(a)
    da = []
    for d in range(n):
        lvl = jets.fresh_level()
        xs = jets.seed_component(xc, d, lvl)
        ad = space.a_at(xs)
        da.append([[jets.eps(ad[i][j], lvl) for j in range(n)]
                   for i in range(n)])
    gamma = [[[0.0] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                acc = 0.0
                for m in range(n):
                    acc = acc + a_inv[k][m] * (
                        da[j][m][i] + da[i][m][j] - da[m][i][j])
                val = 0.5 * acc
                gamma[k][i][j] = val
                gamma[k][j][i] = val
    return gamma


def base_at(space, x):
    """All background data at a point; raises DefinitionError on a bad
    metric or non-unit axis."""
    n = space.n
    xf = [float(c) for c in x]
    a = space.a_np(xf)
    if not np.allclose(a, a.T, atol=1e-12):
        raise DefinitionError("metric coefficient table is not symmetric")
    det_a = float(np.linalg.det(a))
    if abs(det_a) < 1e-300:
        raise DefinitionError(f"metric is singular at x={xf}")
    a_inv = np.linalg.inv(a)
    b = space.b_np(xf)
    unit = float(b @ a_inv @ b)
    if abs(unit - 1.0) > 1e-6:
        raise DefinitionError(
            f"axis 1-form is not unit: a^ij b_i b_j = {unit!r} at x={xf}")

    gamma = np.array(christoffel_at(space, xf), dtype=float)

    # nabla_i b_j = d_i b_j - b_k gamma^k_ij
    db = np.zeros((n, n))
    for d in range(n):
        lvl = jets.fresh_level()
        xs = jets.seed_component(xf, d, lvl)
        bd = space.b_at(xs)
        db[d, :] = [jets.real(jets.eps(bd[j], lvl)) for j in range(n)]
    nabla_b = db - np.einsum("k,kij->ij", b, gamma)

    # riemann[n][i][k][m] = d_k gamma^i_mn - d_m gamma^i_kn
    #                     + gamma^i_kl gamma^l_mn - gamma^i_ml gamma^l_kn
    dgamma = np.zeros((n, n, n, n))  # [d][k][i][j] = d_d gamma^k_ij
    for d in range(n):
        lvl = jets.fresh_level()
        xs = jets.seed_component(xf, d, lvl)
        gd = christoffel_at(space, xs)
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    dgamma[d, k, i, j] = jets.real(jets.eps(gd[k][i][j], lvl))
    riemann = (
        np.einsum("kimn->nikm", dgamma)
        - np.einsum("mikn->nikm", dgamma)
        + np.einsum("ikl,lmn->nikm", gamma, gamma)
        - np.einsum("iml,lkn->nikm", gamma, gamma)
    )

    lvls = [jets.fresh_level() for _ in range(n)]
    grad_g = np.zeros(n)
    for d in range(n):
        xs = jets.seed_component(xf, d, lvls[d])
        grad_g[d] = jets.real(jets.eps(space.g_at(xs), lvls[d]))

    return BasePointData(a=a, a_inv=a_inv, det_a=det_a, christoffel=gamma,
                         nabla_b=nabla_b, riemann=riemann, grad_g=grad_g)


def pd_split(space, x, y):
    """(b, q, S) of a tangent vector in a positive-definite space."""
    if space.signature != PD:
        raise DomainError("pd_split requires a positive-definite space")
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        raise DomainError("zero tangent vector")
    xf = [float(c) for c in x]
    a = space.a_np(xf)
    bvec = space.b_np(xf)
    b = float(bvec @ y)
    s2 = float(y @ a @ y)
    q2 = s2 - b * b
    if q2 < 0.0:
        if q2 < -1e-12 * max(s2, 1.0):
            raise DefinitionError(
                f"r-quadratic form negative ({q2}) at x={xf}; "
                "metric/axis data inconsistent")
        q2 = 0.0
    return b, float(np.sqrt(q2)), float(np.sqrt(s2))


def sr_split(space, x, y):
    """(b, q, S) in the indefinite case; q from r = b (x) b - a."""
    if space.signature != SR:
        raise DomainError("sr_split requires an indefinite space")
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        raise DomainError("zero tangent vector")
    xf = [float(c) for c in x]
    a = space.a_np(xf)
    bvec = space.b_np(xf)
    b = float(bvec @ y)
    ayy = float(y @ a @ y)
    q2 = b * b - ayy
    if q2 < 0.0:
        if q2 < -1e-10 * max(abs(ayy), 1.0):
            raise DefinitionError(
                f"r-quadratic form negative ({q2}) at x={xf}; the axis "
                "1-form is not timelike-unit for this metric")
        q2 = 0.0
    return b, float(np.sqrt(q2)), float(np.sqrt(abs(ayy)))


@dataclass
class InvariantResult:
    name: str
    ok: bool
    detail: str


def validate(space, points=200, seed=42):
    """Sampled validation of the structural invariants of a definition.

    Returns a list of InvariantResult; nothing is renormalized silently.
    """
    rng = np.random.default_rng(seed)
    lo = np.array([d[0] for d in space.domain])
    hi = np.array([d[1] for d in space.domain])
    results = []

    sym_ok = all(space.metric[i][j] == space.metric[j][i]
                 for i in range(space.n) for j in range(space.n))
    results.append(InvariantResult(
        "metric-symmetry", sym_ok,
        "coefficient table symmetric by construction" if sym_ok
        else "metric[i][j] != metric[j][i] for some i, j"))

    worst_unit = 0.0
    sig_ok = True
    charge_ok = True
    detail_sig = ""
    detail_charge = ""
    for _ in range(points):
        x = lo + (hi - lo) * rng.random(space.n)
        try:
            a = space.a_np(x)
            bvec = space.b_np(x)
            g = space.g_np(x)
        except Exception as exc:  # evaluation error inside the box
            results.append(InvariantResult(
                "coefficients-evaluable", False, f"{exc} at x={x.tolist()}"))
            return results
        eig = np.linalg.eigvalsh(a)
        if space.signature == PD:
            if eig[0] <= 0.0:
                sig_ok = False
                detail_sig = f"eigenvalues {eig.tolist()} at x={x.tolist()}"
            if not (-2.0 < g < 2.0):
                charge_ok = False
                detail_charge = f"g={g} outside (-2, 2) at x={x.tolist()}"
        else:
            if not (eig[-1] > 0.0 and np.all(eig[:-1] < 0.0)):
                sig_ok = False
                detail_sig = f"eigenvalues {eig.tolist()} at x={x.tolist()}"
        try:
            unit = abs(float(bvec @ np.linalg.inv(a) @ bvec) - 1.0)
        except np.linalg.LinAlgError:
            sig_ok = False
            detail_sig = f"singular metric at x={x.tolist()}"
            unit = np.inf
        worst_unit = max(worst_unit, unit)

    results.append(InvariantResult(
        "signature", sig_ok,
        detail_sig or ("positive definite at all samples"
                       if space.signature == PD
                       else "time-space signature at all samples")))
    if space.signature == PD:
        results.append(InvariantResult(
            "charge-range", charge_ok,
            detail_charge or "charge within (-2, 2) at all samples"))
    results.append(InvariantResult(
        "axis-unit-norm", worst_unit <= 1e-9,
        f"max |a^ij b_i b_j - 1| = {worst_unit:.3e}"))
    return results
