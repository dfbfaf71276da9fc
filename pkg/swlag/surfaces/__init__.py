"""Surface registry."""

from typing import Any, Dict, Type
import logging

from ..exceptions import ConfigError
from .base import BaseSurface
from .cone import ConeSurface
from .constructed import ConstructedSurface

_LOGGER = logging.getLogger(__name__)

# Registry of surfaces
SURFACES: Dict[str, Type[BaseSurface]] = {
    "constructed": ConstructedSurface,
    "cone": ConeSurface,
}


def get_surface(name: str, **params: Any) -> BaseSurface:
    """Build the surface registered under the given name."""
    _LOGGER.debug("Getting surface %s with %s", name, params)
    if name not in SURFACES:
        _LOGGER.warning("Unsupported surface: %s", name)
        raise ConfigError(f"Unsupported surface: {name}")
    return SURFACES[name].from_params(**params)


__all__ = [
    "BaseSurface",
    "ConeSurface",
    "ConstructedSurface",
    "SURFACES",
    "get_surface",
]
