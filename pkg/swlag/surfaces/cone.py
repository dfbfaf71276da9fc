"""Schoen-Wolfson cones Sigma_{p,q}."""

from typing import Any, Dict, List

from ..sw_maps import ConeParams, SurfaceFrame, cone_arrays
from .base import BaseSurface


class ConeSurface(BaseSurface):
    """Cone (r^{sqrt(pq)}/sqrt(p+q)) (sqrt(q) e^{ip theta}, i sqrt(p) e^{-iq theta})."""

    def __init__(self, cone: ConeParams) -> None:
        """Initialize from cone exponents."""
        self.cone = cone

    @classmethod
    def from_params(cls, p: int = 1, q: int = 2) -> "ConeSurface":
        """Build from the exponents p and q."""
        return cls(ConeParams(p=p, q=q))

    @property
    def name(self) -> str:
        return "cone"

    @property
    def singular_points(self) -> List[complex]:
        return [0j]

    def frame(self, z) -> SurfaceFrame:
        return cone_arrays(self.cone, z)

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "p": self.cone.p, "q": self.cone.q}
