"""Ready-made space families: warped products in axis-adapted coordinates,
special warped and stationary cases, flat products, and the bundled example
catalogue used by the check suites and the CLI fixtures."""

from __future__ import annotations

import numpy as np

from . import exprlang, jets
from .base_space import PD, SR, SpaceDefinition
from .errors import DefinitionError
from .exprlang import evaluate, mul, num, parse, powx


def _coords_used(ast, acc=None):
    if acc is None:
        acc = set()
    if isinstance(ast, exprlang.Coord):
        acc.add(ast.index)
    elif isinstance(ast, exprlang.Neg):
        _coords_used(ast.child, acc)
    elif isinstance(ast, exprlang.BinOp):
        _coords_used(ast.left, acc)
        _coords_used(ast.right, acc)
    elif isinstance(ast, exprlang.Call):
        _coords_used(ast.arg, acc)
    return acc


def make_warped(n, phi, base_p, g, name="warped", domain=None,
                probe_points=50, seed=7):
    """Warped-product space: a = diag(1, phi^2 p_ab), axis 1-form = dt.

    ``phi`` is an expression (source or AST) over all coordinates;
    ``base_p`` is an (n-1) x (n-1) table of expressions over the transverse
    coordinates x1..x{n-1}; ``g`` is the constant charge.
    """
    if isinstance(phi, str):
        phi = parse(phi, n)
    p = [[parse(e, n) if isinstance(e, str) else e for e in row]
         for row in base_p]
    if len(p) != n - 1 or any(len(row) != n - 1 for row in p):
        raise DefinitionError(
            f"base metric table must be {n - 1} x {n - 1}")
    for row in p:
        for e in row:
            if 0 in _coords_used(e):
                raise DefinitionError(
                    "base metric entries may not depend on the warped "
                    "coordinate t")
    metric = [[exprlang.ZERO] * n for _ in range(n)]
    metric[0][0] = exprlang.ONE
    phi2 = powx(phi, num(2))
    for a in range(n - 1):
        for b in range(a, n - 1):
            entry = mul(phi2, p[a][b])
            metric[a + 1][b + 1] = entry
            metric[b + 1][a + 1] = entry
    oneform = [exprlang.ONE] + [exprlang.ZERO] * (n - 1)
    if domain is None:
        domain = tuple((-1.0, 1.0) for _ in range(n))
    space = SpaceDefinition(
        n=n, signature=PD,
        metric=tuple(tuple(row) for row in metric),
        oneform=tuple(oneform),
        charge=num(g), name=name, domain=tuple(tuple(d) for d in domain),
        meta={"family": "warped", "phi": phi})

    rng = np.random.default_rng(seed)
    lo = np.array([d[0] for d in space.domain])
    hi = np.array([d[1] for d in space.domain])
    for _ in range(probe_points):
        x = lo + (hi - lo) * rng.random(n)
        val = float(evaluate(phi, list(x)))
        if val <= 0.0:
            raise DefinitionError(
                f"warp factor is not positive at x={x.tolist()}: {val}")
        pm = np.array([[float(evaluate(p[a][b], list(x)))
                        for b in range(n - 1)] for a in range(n - 1)])
        if np.linalg.eigvalsh(pm)[0] <= 0.0:
            raise DefinitionError(
                f"transverse base metric not positive definite at "
                f"x={x.tolist()}")
    return space


def make_special_warped(phi_of_t, base_p, g, name="special-warped",
                        domain=None, n=3):
    """Warped space whose warp depends on t only.  The returned space
    carries callables ``k_of_t`` and ``f_of_t`` in its meta: the expansion
    scalar k = phi'/phi and the proportionality factor f = k' + k^2 of the
    commutator field relative to the axis form."""
    if isinstance(phi_of_t, str):
        phi_of_t = parse(phi_of_t, n)
    used = _coords_used(phi_of_t)
    if used - {0}:
        raise DefinitionError(
            "special warped spaces require a warp depending on t only, "
            f"got coordinates {sorted(used)}")
    space = make_warped(n, phi_of_t, base_p, g, name=name, domain=domain)

    def k_of_t(t):
        lvl = jets.fresh_level()
        val = evaluate(phi_of_t, [jets.Jet(lvl, float(t), 1.0)]
                       + [0.0] * (n - 1))
        return jets.real(jets.eps(val, lvl)) / jets.real(val)

    def f_of_t(t):
        l1 = jets.fresh_level()
        l2 = jets.fresh_level()
        tt = jets.Jet(l2, jets.Jet(l1, float(t), 1.0), 1.0)
        val = evaluate(phi_of_t, [tt] + [0.0] * (n - 1))
        phi0 = jets.real(val)
        d1 = jets.real(jets.eps(val, l1))
        d2 = jets.real(jets.eps(jets.eps(val, l2), l1))
        k = d1 / phi0
        kprime = d2 / phi0 - k * k
        return kprime + k * k

    space.meta.update({"family": "special-warped",
                       "k_of_t": k_of_t, "f_of_t": f_of_t})
    return space


def _flat_pd(g, name, oneform=("1", "0", "0"), domain=None):
    n = 3
    metric = tuple(tuple(parse("1" if i == j else "0", n) for j in range(n))
                   for i in range(n))
    return SpaceDefinition(
        n=n, signature=PD, metric=metric,
        oneform=tuple(parse(e, n) for e in oneform),
        charge=parse(str(g), n), name=name,
        domain=domain or tuple(((-1.0, 1.0),) * n))


def _minkowski_sr(g, name):
    n = 3
    entries = [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]]
    metric = tuple(tuple(parse(entries[i][j], n) for j in range(n))
                   for i in range(n))
    oneform = (parse("1", n), parse("0", n), parse("0", n))
    return SpaceDefinition(
        n=n, signature=SR, metric=metric, oneform=oneform,
        charge=parse(str(g), n), name=name,
        domain=tuple(((-1.0, 1.0),) * n))


SPHERE_P = (("1", "0"), ("0", "sin(x1)^2"))
FLAT_P = (("1", "0"), ("0", "1"))


def bundled_examples():
    """Named catalogue covering every regime the checks exercise."""
    spaces = {}

    spaces["euclid-g0"] = _flat_pd(0.0, "euclid-g0")
    spaces["euclid-g0"].meta.update({"expected_class": "RIEMANNIAN"})

    spaces["euclid-g08"] = _flat_pd(0.8, "euclid-g08")
    spaces["euclid-g08"].meta.update({"expected_class": "BERWALD"})

    warp_exp = make_special_warped(
        "exp(t)", FLAT_P, 0.6, name="warp-exp",
        domain=((-0.5, 0.5), (-1.0, 1.0), (-1.0, 1.0)))
    warp_exp.meta.update({"expected_class": "LANDSBERG", "expected_k": "1"})
    spaces["warp-exp"] = warp_exp

    warp_cosh = make_special_warped(
        "(exp(t) + exp(-t))/2", FLAT_P, 0.5, name="warp-cosh",
        domain=((-0.8, 0.8), (-1.0, 1.0), (-1.0, 1.0)))
    warp_cosh.meta.update({"expected_class": "LANDSBERG"})
    spaces["warp-cosh"] = warp_cosh

    polar = make_special_warped(
        "t", SPHERE_P, 0.5, name="polar-flat",
        domain=((0.6, 1.8), (0.5, 2.6), (0.0, 2.0)))
    polar.meta.update({"expected_class": "LANDSBERG", "b_stationary": True})
    spaces["polar-flat"] = polar

    product = make_warped(
        3, "1", SPHERE_P, 0.6, name="product-sphere",
        domain=((-1.0, 1.0), (0.5, 2.6), (0.0, 2.0)))
    product.meta.update({"expected_class": "BERWALD"})
    spaces["product-sphere"] = product

    curved0 = make_special_warped(
        "exp(t)", FLAT_P, 0.0, name="curved-riemann",
        domain=((-0.5, 0.5), (-1.0, 1.0), (-1.0, 1.0)))
    curved0.meta.update({"expected_class": "RIEMANNIAN"})
    spaces["curved-riemann"] = curved0

    skew = make_warped(
        3, "exp((1 + 0.2*x1)*t)", FLAT_P, 0.6, name="warp-skew",
        domain=((-0.4, 0.4), (-0.8, 0.8), (-1.0, 1.0)))
    skew.meta.update({"expected_class": "LANDSBERG"})
    spaces["warp-skew"] = skew

    generic = _flat_pd(
        0.5, "generic-b", oneform=("cos(x1)", "sin(x1)", "0"))
    generic.meta.update({"expected_class": "GENERIC"})
    spaces["generic-b"] = generic

    spaces["minkowski-sr"] = _minkowski_sr(0.0, "minkowski-sr")
    spaces["sr-g1"] = _minkowski_sr(1.0, "sr-g1")

    return spaces
