"""Tests for the discrete Poisson extension."""

import numpy as np
import pytest

from swlag.exceptions import DomainError, ResolutionError
from swlag.poisson import (
    BoundaryData,
    blaschke_boundary_data,
    constant_trace_defect,
    extension_on_grid,
    g_boundary_data,
    harmonic_extension,
    modulus_convergence_profile,
    poisson_kernel,
    sign_boundary_data,
    trace_defect,
)

RADII = [0.9, 0.95, 0.99]


def test_monomial_extension():
    data = BoundaryData.from_function(lambda theta: np.exp(3j * theta), 4096)
    for r, distance in modulus_convergence_profile(data, RADII):
        assert distance == pytest.approx(1.0 - r**3, abs=1e-9)


def test_blaschke_profile():
    profile = modulus_convergence_profile(blaschke_boundary_data(0.5, 4096), RADII)
    expected = [1.0 - (r - 0.5) / (1.0 - 0.5 * r) for r in RADII]
    assert [d for _, d in profile] == pytest.approx(expected, rel=1e-6)
    assert profile[0][1] > profile[1][1] > profile[2][1]


def test_g_profile_is_bounded(phi):
    profile = modulus_convergence_profile(g_boundary_data(phi, 4096), RADII)
    assert all(0.0 <= d <= 1.0 for _, d in profile)


def test_g_profile_strictly_decreasing(phi):
    profile = modulus_convergence_profile(g_boundary_data(phi, 2**14), RADII)
    distances = [d for _, d in profile]
    assert [r for r, _ in profile] == RADII
    assert distances[0] > distances[1] > distances[2]
    assert distances[2] < 1.0


def test_sign_control_stays_away():
    profile = modulus_convergence_profile(sign_boundary_data(4096), RADII)
    assert all(d > 0.5 for _, d in profile)


def test_direct_and_fft_extension_agree():
    data = blaschke_boundary_data(0.3 + 0.4j, 512)
    direct = harmonic_extension(data, 0.9, data.theta)
    assert np.allclose(direct, extension_on_grid(data, 0.9), atol=1e-10)
    z = 0.9 * np.exp(1j * data.theta[7])
    assert harmonic_extension(data, 0.9, data.theta[7]) == pytest.approx(
        (z - (0.3 + 0.4j)) / (1 - (0.3 - 0.4j) * z), abs=1e-10
    )


def test_unresolvable_radius():
    data = blaschke_boundary_data(0.5, 64)
    with pytest.raises(ResolutionError):
        extension_on_grid(data, 0.95)


def test_rejects_bad_data():
    with pytest.raises(DomainError):
        BoundaryData(np.array([1.0, 2j]))
    with pytest.raises(DomainError):
        poisson_kernel(1.0, 0.0)
    with pytest.raises(DomainError):
        blaschke_boundary_data(1.0, 64)


def test_constant_trace_defect(phi):
    defect = constant_trace_defect(phi)
    assert defect > 0.5
    assert constant_trace_defect(phi.with_order(40)) == pytest.approx(defect, abs=1e-10)


def test_trace_defect_control():
    assert trace_defect(lambda theta: np.log(np.abs(2.0 * np.exp(3j * theta))), 256) <= 1e-12
    with pytest.raises(DomainError):
        trace_defect(lambda theta: np.zeros_like(theta), 128)


def test_csv_round_trip(phi, tmp_path):
    data = g_boundary_data(phi, 256)
    path = tmp_path / "trace.csv"
    data.to_csv(path)
    loaded = BoundaryData.from_csv(path)
    assert loaded.M == 256
    assert loaded.offset == pytest.approx(0.5, abs=1e-9)
    assert np.array_equal(loaded.samples, data.samples)
    assert path.read_text().splitlines()[0] == "theta,re,im"
