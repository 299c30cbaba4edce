"""Exact higher-order directional derivatives via nested forward-mode jets.

A ``Jet`` is a first-order dual number ``re + eps*im`` whose parts may
themselves be jets carrying *other* infinitesimals.  Every infinitesimal is
tagged with a globally unique, monotonically increasing ``level``; arithmetic
aligns parts by tag, so independent differentiations never confuse their
perturbations and mixed partials of any order come from nesting.  Taking the
k-th derivative means seeding k fresh levels and reading off the coefficient
of the product of all k epsilons.

The module also provides a 4th-order central finite-difference oracle that is
deliberately independent of the jet path; it exists to cross-check the jets,
never to replace them.
"""

from __future__ import annotations

import itertools
import math

from .errors import DomainError, UnsupportedOrderError

_LEVELS = itertools.count(1)


def fresh_level():
    """Allocate a new infinitesimal tag, strictly larger than all before it."""
    return next(_LEVELS)


class Jet:
    """re + eps*im with a level-tagged epsilon; parts are floats or jets."""

    __slots__ = ("level", "re", "im")

    def __init__(self, level, re, im):
        self.level = level
        self.re = re
        self.im = im

    def __repr__(self):
        return f"Jet({self.level}, {self.re!r}, {self.im!r})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, o):
        if isinstance(o, Jet):
            if o.level == self.level:
                return Jet(self.level, self.re + o.re, self.im + o.im)
            if o.level > self.level:
                return Jet(o.level, self + o.re, o.im)
        return Jet(self.level, self.re + o, self.im)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.level, -self.re, -self.im)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Jet):
            if o.level == self.level:
                return Jet(self.level, self.re * o.re,
                           self.re * o.im + self.im * o.re)
            if o.level > self.level:
                return Jet(o.level, self * o.re, self * o.im)
        return Jet(self.level, self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Jet):
            return self * _recip(o)
        return Jet(self.level, self.re / o, self.im / o)

    def __rtruediv__(self, o):
        return _recip(self) * o

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        return powf(self, p)

    def __rpow__(self, base):
        return exp(self * log(base))

    def __abs__(self):
        # Smooth branch selected by the real part; undefined at exactly 0.
        return self if real(self) >= 0.0 else -self

    # Comparisons act on real parts; used only for branch/guard logic.

    def __lt__(self, o):
        return real(self) < real(o)

    def __le__(self, o):
        return real(self) <= real(o)

    def __gt__(self, o):
        return real(self) > real(o)

    def __ge__(self, o):
        return real(self) >= real(o)

    def __float__(self):
        return float(real(self))


def _recip(j):
    if not isinstance(j, Jet):
        return 1.0 / j
    r = _recip(j.re)
    return Jet(j.level, r, -(j.im * r) * r)


def real(v):
    """Strip every infinitesimal part."""
    while isinstance(v, Jet):
        v = v.re
    return v


def eps(v, level):
    """Coefficient of the level-tagged epsilon in ``v`` (0.0 if absent)."""
    if not isinstance(v, Jet):
        return 0.0
    if v.level == level:
        return v.im
    if v.level < level:
        return 0.0
    return Jet(v.level, eps(v.re, level), eps(v.im, level))


def seed_component(values, index, level):
    """Copy of ``values`` with component ``index`` seeded at ``level``."""
    out = list(values)
    out[index] = Jet(level, out[index], 1.0)
    return out


def seed_direction(values, direction, level):
    """Copy of ``values`` seeded along ``direction`` at ``level``."""
    out = list(values)
    for i, d in enumerate(direction):
        d = float(d)
        if d != 0.0:
            out[i] = Jet(level, out[i], d)
    return out


# -- elementary functions, generic over float | Jet --------------------------

def powf(x, p):
    """x**p for real p.  Integer p works for any base; otherwise x > 0."""
    if not isinstance(x, Jet):
        return float(x) ** p
    if float(p) == int(p):
        n = int(p)
        if n == 0:
            return 1.0
        if n < 0:
            return _recip(powf(x, -n))
        acc = x
        for _ in range(n - 1):
            acc = acc * x
        return acc
    return Jet(x.level, powf(x.re, p), x.im * (p * powf(x.re, p - 1.0)))


def exp(v):
    if not isinstance(v, Jet):
        return math.exp(v)
    e = exp(v.re)
    return Jet(v.level, e, v.im * e)


def log(v):
    if not isinstance(v, Jet):
        return math.log(v)
    return Jet(v.level, log(v.re), v.im / v.re)


def sqrt(v):
    if not isinstance(v, Jet):
        return math.sqrt(v)
    s = sqrt(v.re)
    return Jet(v.level, s, v.im / (2.0 * s))


def sin(v):
    if not isinstance(v, Jet):
        return math.sin(v)
    return Jet(v.level, sin(v.re), v.im * cos(v.re))


def cos(v):
    if not isinstance(v, Jet):
        return math.cos(v)
    return Jet(v.level, cos(v.re), -(v.im * sin(v.re)))


def tan(v):
    if not isinstance(v, Jet):
        return math.tan(v)
    t = tan(v.re)
    return Jet(v.level, t, v.im * (1.0 + t * t))


def atan(v):
    if not isinstance(v, Jet):
        return math.atan(v)
    return Jet(v.level, atan(v.re), v.im / (1.0 + v.re * v.re))


def tanh(v):
    if not isinstance(v, Jet):
        return math.tanh(v)
    t = tanh(v.re)
    return Jet(v.level, t, v.im * (1.0 - t * t))


def atan2(y, x):
    """Smooth two-argument arctangent; differentiable wherever (x,y) != 0."""
    jy, jx = isinstance(y, Jet), isinstance(x, Jet)
    if not jy and not jx:
        return math.atan2(y, x)
    level = max(y.level if jy else 0, x.level if jx else 0)
    yr, yi = (y.re, y.im) if jy and y.level == level else (y, 0.0)
    xr, xi = (x.re, x.im) if jx and x.level == level else (x, 0.0)
    num = xr * yi - yr * xi
    return Jet(level, atan2(yr, xr), num / (xr * xr + yr * yr))


# -- public derivative operators ---------------------------------------------

def _as_float_list(v):
    return [float(c) for c in v]


def derive_y(f, x, y, indices):
    """Exact mixed partial d^k f / dy^{i1}..dy^{ik}, k <= 3.

    ``f`` is called as ``f(x_coords, y_coords)`` and must accept jet-valued
    coordinates.  Indices are canonically sorted before seeding, which makes
    the result bitwise symmetric under index permutation.
    """
    if len(indices) > 3:
        raise UnsupportedOrderError(
            f"derive_y supports y-orders up to 3, got {len(indices)}")
    return _derive(f, x, y, indices, wrt="y")


def derive_x(f, x, y, indices):
    """Exact mixed partial with respect to base coordinates, order <= 2."""
    if len(indices) > 2:
        raise UnsupportedOrderError(
            f"derive_x supports x-orders up to 2, got {len(indices)}")
    return _derive(f, x, y, indices, wrt="x")


def _derive(f, x, y, indices, wrt):
    xs = _as_float_list(x)
    ys = _as_float_list(y)
    target = xs if wrt == "x" else ys
    levels = []
    for idx in sorted(indices):
        lvl = fresh_level()
        target[idx] = Jet(lvl, target[idx], 1.0)
        levels.append(lvl)
    out = f(xs, ys)
    for lvl in reversed(levels):
        out = eps(out, lvl)
    return real(out)


def fd_oracle(f, x, y, variable, index, h=None):
    """4th-order central finite difference of the first partial of ``f``.

    Independent of the jet machinery on purpose: wherever jets are used,
    this is the cross-check.  Raises DomainError if any stencil point is
    not evaluable (e.g. the stencil straddles a singular direction).
    """
    if variable not in ("x", "y"):
        raise ValueError(f"variable must be 'x' or 'y', got {variable!r}")
    xs = _as_float_list(x)
    ys = _as_float_list(y)
    coords = xs if variable == "x" else ys
    if h is None:
        h = 1e-5 * max(1.0, abs(coords[index]))
    if h <= 0.0:
        raise ValueError("step h must be positive")

    def at(offset):
        shifted = list(coords)
        shifted[index] += offset
        try:
            if variable == "x":
                return float(f(shifted, ys))
            return float(f(xs, shifted))
        except DomainError:
            raise
        except (ArithmeticError, ValueError) as exc:
            raise DomainError(
                f"stencil point at offset {offset:+g} not evaluable: {exc}"
            ) from exc

    return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h)


# -- small generic linear algebra (works on floats and jets) -----------------

def mat_inverse(m):
    """Gauss-Jordan inverse of a small square matrix of floats/jets."""
    n = len(m)
    a = [list(row) for row in m]
    inv = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(real(a[r][col])))
        if real(a[piv][col]) == 0.0:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        scale = _recip(a[col][col]) if isinstance(a[col][col], Jet) \
            else 1.0 / a[col][col]
        a[col] = [v * scale for v in a[col]]
        inv[col] = [v * scale for v in inv[col]]
        for row in range(n):
            if row == col:
                continue
            factor = a[row][col]
            if isinstance(factor, Jet) or factor != 0.0:
                a[row] = [a[row][k] - factor * a[col][k] for k in range(n)]
                inv[row] = [inv[row][k] - factor * inv[col][k]
                            for k in range(n)]
    return inv
