"""Shared fixtures for the swlag test suite."""

import numpy as np
import pytest

from swlag.holo import DampedBlaschke
from swlag.sw_maps import MapParams


@pytest.fixture
def phi():
    """Default damped Blaschke product, s = 0.25 and K = 60."""
    return DampedBlaschke.from_params(s=0.25, K=60)


@pytest.fixture(params=[1, 2, 3])
def params(request, phi):
    """Map parameters for j = 1, 2, 3."""
    return MapParams(j=request.param, phi=phi)


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(20240611)


def safe_sample(phi, rng, n, r_max=0.95, zero_gap=0.05, boundary_gap=0.1):
    """Random points away from the zeros of phi and from z = -1."""
    points = []
    while len(points) < n:
        r = r_max * np.sqrt(rng.random(4 * n))
        z = r * np.exp(2j * np.pi * rng.random(4 * n))
        gap = np.min(np.abs(z[:, None] - phi.zeros[None, :]), axis=1)
        keep = (gap >= zero_gap) & (np.abs(z + 1.0) >= boundary_gap)
        points.extend(z[keep].tolist())
    return np.array(points[:n])
