"""Base surface class."""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Tuple
import logging

import numpy as np

from ..models import SurfaceSample
from ..sw_maps import SurfaceFrame

_LOGGER = logging.getLogger(__name__)


class BaseSurface(ABC):
    """Base class for conformally parametrized Lagrangian surfaces D^2 -> C^2."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Return registry name."""
        pass

    @property
    @abstractmethod
    def singular_points(self) -> List[complex]:
        """Return the known singular points inside the disc."""
        pass

    @abstractmethod
    def frame(self, z) -> SurfaceFrame:
        """Return Phi, its first derivatives, angle and conformal factor."""
        pass

    def components(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """Return the two complex components of Phi."""
        frame = self.frame(z)
        return frame.Phi1, frame.Phi2

    def position(self, z) -> np.ndarray:
        """Return Phi as an (..., 4) real array."""
        return self.frame(z).position

    def sample(self, z: complex) -> SurfaceSample:
        """Return one SurfaceSample."""
        _LOGGER.debug("Sampling %s at %s", self.name, z)
        return self.frame(np.array([complex(z)])).sample(0)

    def describe(self) -> Dict[str, Any]:
        """Return the surface parameters as a dictionary."""
        return {"name": self.name}
