"""Tests for the quadrature rules."""

import math

import mpmath
import numpy as np
import pytest

from swlag.quadrature import adaptive_quadtree, composite_gauss, gauss_legendre, periodic_nodes, smooth_cutoff


def test_gauss_legendre_exactness():
    x, w = gauss_legendre(5, 0.0, 2.0)
    assert np.dot(w, x**9) == pytest.approx(2.0**10 / 10.0, rel=1e-13)
    assert w.sum() == pytest.approx(2.0)


def test_composite_gauss():
    x, w = composite_gauss([0.0, 0.5, 1.0, math.pi], 8)
    assert x.size == 24
    assert np.dot(w, np.sin(x)) == pytest.approx(2.0, rel=1e-12)


def test_periodic_nodes():
    theta = periodic_nodes(4, offset=0.5)
    assert theta == pytest.approx([math.pi / 4, 3 * math.pi / 4, 5 * math.pi / 4, 7 * math.pi / 4])


def test_smooth_cutoff():
    rho = np.array([0.0, 0.2, 0.5, 0.75, 1.0, 2.0])
    value = smooth_cutoff(rho, 1.0)
    assert value[:3].tolist() == [1.0, 1.0, 1.0]
    assert value[3] == pytest.approx(0.5)
    assert value[4:].tolist() == [0.0, 0.0]


def test_adaptive_quadtree_smooth():
    result = adaptive_quadtree(lambda x, y: np.exp(x + y), (0.0, 1.0, 0.0, 1.0), rtol=1e-12)
    assert result.converged
    assert result.value == pytest.approx((math.e - 1.0) ** 2, rel=1e-11)


@pytest.mark.parametrize(
    "f, bounds, expected",
    [
        (lambda x, y: x * y**2, (0.0, 2.0, -1.0, 3.0), 2.0 * 28.0 / 3.0),
        (lambda x, y: np.cos(x * y), (0.0, 1.0, 0.0, 1.0), 0.946083070367183),
        (
            lambda x, y: 1.0 / (1.0 + x**2 + y**2),
            (-1.0, 1.0, -1.0, 1.0),
            float(mpmath.quad(lambda x, y: 1 / (1 + x**2 + y**2), [-1, 1], [-1, 1])),
        ),
    ],
)
def test_adaptive_quadtree_non_separable(f, bounds, expected):
    result = adaptive_quadtree(f, bounds, rtol=1e-11)
    assert result.converged
    assert result.value == pytest.approx(expected, rel=1e-10)


def test_adaptive_quadtree_constant_integrand():
    result = adaptive_quadtree(lambda x, y: 3.0, (0.0, 2.0, 1.0, 2.5), rtol=1e-12)
    assert result.value == pytest.approx(9.0, rel=1e-13)


def test_adaptive_quadtree_chunked():
    f = lambda x, y: np.exp(-(x**2) - y**2)
    reference = adaptive_quadtree(f, (0.0, 1.0, 0.0, 1.0), rtol=1e-13)
    chunked = adaptive_quadtree(f, (0.0, 1.0, 0.0, 1.0), rtol=1e-13, chunk=3)
    assert chunked.converged
    assert chunked.value == pytest.approx(reference.value, rel=1e-14)
    assert chunked.evaluations == reference.evaluations
    assert chunked.value == pytest.approx((0.5 * math.sqrt(math.pi) * math.erf(1.0)) ** 2, rel=1e-12)
