from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gpe2d import Field2D, GridError, coordinates, l2_norm, make_grid, wavenumbers
from gpe2d.model import gaussian, hat


@pytest.mark.parametrize("m, h", [(512, 1 / 32), (256, 1 / 16)])
def test_make_grid_paper_mesh_sizes(m, h):
    g = make_grid(-8, 8, -8, 8, m, m)
    assert g.dx == h and g.dy == h


def test_make_grid_unit_square():
    g = make_grid(0, 1, 0, 1, 4, 4)
    assert (g.dx, g.dy) == (0.25, 0.25)


@pytest.mark.parametrize("args", [
    (1, 0, 0, 1, 4, 4),
    (0, 1, 1, 1, 4, 4),
    (0, 1, 0, 1, 5, 4),
    (0, 1, 0, 1, 4, 2),
    (0, 1, 0, 1, 4.5, 4),
])
def test_make_grid_rejects(args):
    with pytest.raises(GridError):
        make_grid(*args)


def test_coordinates():
    x, _ = coordinates(make_grid(-8, 8, 0, 1, 4, 4))
    np.testing.assert_array_equal(x, [-8, -4, 0, 4])
    x, y = coordinates(make_grid(0, 1, 0, 1, 4, 4))
    np.testing.assert_array_equal(x, [0, 0.25, 0.5, 0.75])
    np.testing.assert_array_equal(y, x)
    x, _ = coordinates(make_grid(-8, 8, -8, 8, 512, 512))
    assert x[256] == 0.0 and len(x) == 512


def test_wavenumbers_examples():
    k = wavenumbers(make_grid(-8, 8, -8, 8, 4, 4)).kx
    np.testing.assert_allclose(k, [0, np.pi / 8, -np.pi / 4, -np.pi / 8], rtol=0, atol=1e-15)
    k = wavenumbers(make_grid(0, 2 * np.pi, 0, 1, 8, 4)).kx
    np.testing.assert_allclose(k, [0, 1, 2, 3, -4, -3, -2, -1], rtol=0, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 64).map(lambda n: 2 * n), st.floats(0.5, 40))
def test_wavenumber_properties(n, length):
    g = make_grid(-length / 2, length / 2, 0, 1, n, 4)
    kx = wavenumbers(g).kx
    assert kx[0] == 0
    assert np.isclose(np.abs(kx).max(), np.pi * n / length, rtol=1e-14)
    j = np.arange(1, n // 2)
    np.testing.assert_allclose(kx[n - j], -kx[j], rtol=1e-14)
    np.testing.assert_allclose(np.exp(1j * kx * g.lx), 1.0, atol=1e-12)


def test_l2_norm_constant():
    g = make_grid(-8, 8, -8, 8, 64, 64)
    assert l2_norm(Field2D(g, np.ones(g.shape))) == pytest.approx(16.0, rel=1e-15)


def test_l2_norm_gaussian_is_unit():
    # oracle: int |g_1|^2 = 1 over the plane; tail beyond |x| = 8 is e^-64
    g = make_grid(-8, 8, -8, 8, 512, 512)
    assert abs(l2_norm(gaussian(g, 1.0)) - 1.0) < 1e-12


def test_l2_norm_hat_discrete_value():
    # Brute-force exact rational sum of (8-|x|)^2 over the periodic nodes.
    m = 512
    h = Fraction(16, m)
    s = sum((8 - abs(-8 + j * h)) ** 2 for j in range(m)) * h
    g = make_grid(-8, 8, -8, 8, m, m)
    assert l2_norm(hat(g)) == pytest.approx(float(s), rel=1e-13)
    # the rectangle rule carries an O(h^2) kink term: s = 1024/3 + 8 h^2 / 3
    assert s == Fraction(1024, 3) + Fraction(8, 3) * h**2


def test_l2_norm_hat_converges_to_paper_value():
    errs = []
    for m in (128, 256, 512):
        errs.append(abs(l2_norm(hat(make_grid(-8, 8, -8, 8, m, m))) - 1024 / 3))
    assert errs[-1] < 3e-3
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_l2_norm_scales_linearly(c):
    g = make_grid(-8, 8, -8, 8, 16, 16)
    f = gaussian(g)
    assert l2_norm(f * c) == pytest.approx(abs(c) * l2_norm(f), rel=1e-13, abs=1e-300)


def test_l2_norm_zero_and_nonfinite():
    g = make_grid(0, 1, 0, 1, 4, 4)
    assert l2_norm(Field2D(g, np.zeros(g.shape))) == 0.0
    bad = np.ones(g.shape, complex)
    bad[1, 2] = np.nan
    with pytest.raises(ValueError):
        Field2D(g, bad)
    with pytest.raises(ValueError):
        l2_norm(Field2D(g, bad, blown_up=True))


def test_field_layout_is_x_fastest():
    g = make_grid(0, 1, 0, 1, 4, 6)
    f = Field2D(g, np.arange(24, dtype=complex))
    assert f.values.shape == (6, 4)
    assert f.values[1, 0] == 4  # iy = 1, ix = 0
    with pytest.raises(GridError):
        Field2D(g, np.zeros((4, 6)))
