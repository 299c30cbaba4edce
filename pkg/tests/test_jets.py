import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffspace import jets
from ffspace.errors import DomainError, UnsupportedOrderError


def bilinear(x, y):
    return y[0] * y[1]


def cubic(x, y):
    return y[0] * y[0] * y[0]


def test_bilinear_mixed_partial():
    assert jets.derive_y(bilinear, [0.0], [2.0, 3.0], (0, 1)) == 1.0


def test_monomial_third_derivative():
    assert jets.derive_y(cubic, [0.0], [2.0], (0, 0, 0)) == 6.0


def test_kronecker_seed_pattern():
    def proj(i):
        return lambda x, y: y[i]

    for i in range(3):
        for j in range(3):
            got = jets.derive_y(proj(i), [0.0], [1.0, 2.0, 3.0], (j,))
            assert got == (1.0 if i == j else 0.0)


def test_x_independent_field_has_zero_x_derivative():
    f = lambda x, y: y[0] ** 2 + math.pi
    assert jets.derive_x(f, [1.0, 2.0], [3.0], (0,)) == 0.0
    assert jets.derive_x(f, [1.0, 2.0], [3.0], (0, 1)) == 0.0


def test_x_product_rule():
    f = lambda x, y: x[0] * y[0] * y[0]
    got = jets.derive_x(f, [5.0], [4.0], (0,))
    assert got == pytest.approx(16.0, abs=1e-14)


def test_x_chain_rule_second_order():
    # f = exp(x0)^2 = exp(2 x0), d2f/dx0^2 = 4 exp(2 x0)
    f = lambda x, y: jets.exp(x[0]) ** 2
    got = jets.derive_x(f, [0.7], [0.0], (0, 0))
    assert got == pytest.approx(4.0 * math.exp(1.4), rel=1e-13)


def test_order_limits():
    f = lambda x, y: y[0]
    with pytest.raises(UnsupportedOrderError):
        jets.derive_y(f, [0.0], [1.0], (0, 0, 0, 0))
    with pytest.raises(UnsupportedOrderError):
        jets.derive_x(f, [0.0], [1.0], (0, 0, 0))


def test_clairaut_symmetry_is_bitwise():
    def f(x, y):
        return jets.sin(y[0] * y[1]) * jets.exp(y[2] - y[0])

    y = [0.3, 1.7, -0.4]
    for i in range(3):
        for j in range(3):
            a = jets.derive_y(f, [0.0], y, (i, j))
            b = jets.derive_y(f, [0.0], y, (j, i))
            assert a == b  # identical seeding path after canonical sort


def test_fd_oracle_sin():
    f = lambda x, y: math.sin(y[0])
    got = jets.fd_oracle(f, [0.0], [0.9], "y", 0, h=1e-3)
    assert got == pytest.approx(math.cos(0.9), abs=1e-10)


def test_fd_oracle_matches_jets():
    def f(x, y):
        return jets.exp(x[0] * y[0]) + jets.atan(y[1])

    x, y = [0.4], [1.2, -0.3]
    fd = jets.fd_oracle(f, x, y, "y", 0)
    ad = jets.derive_y(f, x, y, (0,))
    assert fd == pytest.approx(ad, rel=1e-9, abs=1e-11)
    fdx = jets.fd_oracle(f, x, y, "x", 0)
    adx = jets.derive_x(f, x, y, (0,))
    assert fdx == pytest.approx(adx, rel=1e-9, abs=1e-11)


def test_fd_oracle_domain_guard():
    def kinked(x, y):
        if y[0] < 0.5e-3:
            raise DomainError("below the admissible band")
        return math.sqrt(y[0])

    with pytest.raises(DomainError):
        jets.fd_oracle(kinked, [0.0], [1e-3], "y", 0, h=1e-3)


def test_fd_oracle_math_error_becomes_domain_error():
    f = lambda x, y: math.sqrt(y[0])
    with pytest.raises(DomainError):
        jets.fd_oracle(f, [0.0], [1e-6], "y", 0, h=1.0)


@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
@settings(max_examples=50, deadline=None)
def test_mixed_partial_of_smooth_field(a, b):
    def f(x, y):
        return jets.exp(0.3 * y[0]) * jets.sin(y[1]) + y[0] * y[1] ** 2

    expected = (0.3 * math.exp(0.3 * a) * math.cos(b)) + 2.0 * b
    got = jets.derive_y(f, [0.0], [a, b], (0, 1))
    assert got == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_atan2_derivatives():
    def f(x, y):
        return jets.atan2(y[1], y[0])

    y = [0.8, -0.5]
    r2 = y[0] ** 2 + y[1] ** 2
    d_dy0 = jets.derive_y(f, [], y, (0,))
    d_dy1 = jets.derive_y(f, [], y, (1,))
    assert d_dy0 == pytest.approx(-y[1] / r2, rel=1e-13)
    assert d_dy1 == pytest.approx(y[0] / r2, rel=1e-13)


def test_mat_inverse_on_jets():
    lvl = jets.fresh_level()
    tt = jets.Jet(lvl, 0.5, 1.0)
    m = [[1.0 + tt * tt, tt], [tt, 2.0]]
    inv = jets.mat_inverse(m)
    # value check at t=0.5
    import numpy as np

    m0 = np.array([[1.25, 0.5], [0.5, 2.0]])
    inv0 = np.linalg.inv(m0)
    for i in range(2):
        for j in range(2):
            assert jets.real(inv[i][j]) == pytest.approx(inv0[i, j], rel=1e-13)
    # derivative check against finite differences
    eps = 1e-7
    mp = np.array([[1.0 + (0.5 + eps) ** 2, 0.5 + eps], [0.5 + eps, 2.0]])
    dinv = (np.linalg.inv(mp) - inv0) / eps
    for i in range(2):
        for j in range(2):
            assert jets.real(jets.eps(inv[i][j], lvl)) == pytest.approx(
                dinv[i, j], rel=1e-5, abs=1e-8)
