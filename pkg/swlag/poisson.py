"""Poisson-kernel harmonic extension of unimodular boundary data on the disc."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

from .const import UNIT_MODULUS_TOL
from .exceptions import DomainError, ExportError, ResolutionError
from .holo import DampedBlaschke, boundary_log_modulus, boundary_shift, evaluate_shifted

_LOGGER = logging.getLogger(__name__)

MIN_TRACE_GRID = 2**8


def poisson_kernel(r: float, theta) -> Union[float, np.ndarray]:
    """P_r(theta) = (1 - r^2) / (2 |r e^{i theta} - 1|^2)."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    theta = np.asarray(theta, dtype=float)
    value = (1.0 - r * r) / (2.0 * np.abs(r * np.exp(1j * theta) - 1.0) ** 2)
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class BoundaryData:
    """Unit-modulus samples psi(theta_m), theta_m = 2 pi (m + offset) / M."""

    samples: np.ndarray
    offset: float = 0.0

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1 or samples.size < 2:
            raise DomainError("Boundary data must be a one-dimensional grid")
        defect = float(np.max(np.abs(np.abs(samples) - 1.0)))
        if defect > UNIT_MODULUS_TOL:
            raise DomainError(f"Boundary data is not unimodular (max defect {defect:.3g})")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_function(
        cls, psi: Callable[[np.ndarray], np.ndarray], M: int, offset: float = 0.0
    ) -> "BoundaryData":
        """Sample psi on the uniform grid of M angles."""
        theta = 2.0 * np.pi * (np.arange(M) + offset) / M
        return cls(np.asarray(psi(theta), dtype=complex), offset)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "BoundaryData":
        """Load (theta, Re psi, Im psi) rows."""
        table = np.loadtxt(Path(path).expanduser(), delimiter=",", skiprows=1, ndmin=2)
        M = table.shape[0]
        offset = float(table[0, 0] * M / (2.0 * np.pi))
        return cls(table[:, 1] + 1j * table[:, 2], offset)

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write (theta, Re psi, Im psi) rows with 17 significant digits."""
        path = Path(path).expanduser()
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            table = np.column_stack([self.theta, self.samples.real, self.samples.imag])
            np.savetxt(path, table, delimiter=",", header="theta,re,im", comments="", fmt="%.17g")
        except OSError as err:
            raise ExportError(f"Failed to write boundary data to {path}: {err}") from err
        _LOGGER.debug("Boundary data written to %s", path)

    @property
    def M(self) -> int:
        """Return the number of samples."""
        return self.samples.size

    @property
    def theta(self) -> np.ndarray:
        """Return the sample angles."""
        return 2.0 * np.pi * (np.arange(self.M) + self.offset) / self.M


def _check_resolution(data: BoundaryData, r: float) -> None:
    if not 0.0 <= r <= 1.0 - 2.0 * np.pi / data.M:
        raise ResolutionError(
            f"r = {r} is not resolvable with M = {data.M} samples (need r <= {1.0 - 2.0 * np.pi / data.M:.6g})"
        )


def harmonic_extension(data: BoundaryData, r: float, theta) -> Union[complex, np.ndarray]:
    """Normalized discrete convolution P_r * psi at the angles theta."""
    _check_resolution(data, r)
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    kernel = poisson_kernel(r, theta_arr[:, None] - data.theta[None, :])
    value = (kernel @ data.samples) / kernel.sum(axis=1)
    return complex(value[0]) if np.ndim(theta) == 0 else value


def extension_on_grid(data: BoundaryData, r: float) -> np.ndarray:
    """Harmonic extension at radius r on the data grid via FFT convolution."""
    _check_resolution(data, r)
    kernel = poisson_kernel(r, 2.0 * np.pi * np.arange(data.M) / data.M)
    return np.fft.ifft(np.fft.fft(kernel) * np.fft.fft(data.samples)) / kernel.sum()


def modulus_convergence_profile(data: BoundaryData, r_list: Sequence[float]) -> List[Tuple[float, float]]:
    """For each r, sup over the grid of |1 - |extension||."""
    profile = []
    for r in r_list:
        distance = float(np.max(np.abs(1.0 - np.abs(extension_on_grid(data, r)))))
        _LOGGER.debug("Modulus profile r=%s: %.6g", r, distance)
        profile.append((float(r), distance))
    return profile


def trace_defect(log_modulus: Callable[[np.ndarray], np.ndarray], M: int) -> float:
    """max - min of a boundary log-modulus on the half-offset grid of M angles."""
    if M < MIN_TRACE_GRID:
        raise DomainError(f"M must be at least {MIN_TRACE_GRID}, got {M}")
    theta = 2.0 * np.pi * (np.arange(M) + 0.5) / M
    values = np.asarray(log_modulus(theta), dtype=float)
    return float(values.max() - values.min())


def constant_trace_defect(phi: DampedBlaschke, M: int = 2**12) -> float:
    """How far G = log|phi| is from having constant trace on the circle."""
    return trace_defect(lambda theta: boundary_log_modulus(phi, theta), M)


def g_boundary_data(phi: DampedBlaschke, M: int) -> BoundaryData:
    """Trace of g on the half-offset grid, which avoids theta = pi."""

    def psi(theta):
        holo = evaluate_shifted(phi, boundary_shift(theta), with_log_deriv=False)
        return np.exp(1j * holo.arg)

    return BoundaryData.from_function(psi, M, offset=0.5)


def blaschke_boundary_data(a: complex, M: int) -> BoundaryData:
    """Boundary values of the single disc automorphism (z - a)/(1 - conj(a) z)."""
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {abs(a)}")

    def psi(theta):
        z = np.exp(1j * theta)
        value = (z - a) / (1.0 - np.conj(a) * z)
        return value / np.abs(value)

    return BoundaryData.from_function(psi, M)


def sign_boundary_data(M: int) -> BoundaryData:
    """Discontinuous control psi = sign(cos theta)."""
    return BoundaryData.from_function(lambda theta: np.where(np.cos(theta) >= 0, 1.0 + 0j, -1.0 + 0j), M, 0.5)
