"""
Service layer: the map registry, sign certificates and the claim suite.
"""

from .maps import MapService, map_service

__all__ = [
    "map_service",
    "MapService",
]
