"""The constructed disc Phi = (u, -conj(v))."""

from typing import Any, Dict, List

from ..holo import DampedBlaschke
from ..sw_maps import MapParams, SurfaceFrame, surface_arrays
from .base import BaseSurface


class ConstructedSurface(BaseSurface):
    """Hamiltonian stationary disc with singularities of type Sigma_{j,j+1} at every p_k."""

    def __init__(self, params: MapParams) -> None:
        """Initialize from map parameters."""
        self.params = params

    @classmethod
    def from_params(cls, j: int = 1, **phi_params: Any) -> "ConstructedSurface":
        """Build from j and the DampedBlaschke parameters."""
        return cls(MapParams(j=j, phi=DampedBlaschke.from_params(**phi_params)))

    @property
    def name(self) -> str:
        return "constructed"

    @property
    def singular_points(self) -> List[complex]:
        return [complex(p) for p in self.params.phi.zeros]

    def frame(self, z) -> SurfaceFrame:
        return surface_arrays(self.params, z)

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "j": self.params.j, **self.params.phi.to_dict()}
