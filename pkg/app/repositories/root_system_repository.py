"""
Repository layer for root systems.
Root systems are addressed by string code ("A1", "B2", ...) and built once.
"""
from threading import Lock
from typing import Dict, List, Optional
import logging

from app.models.root_system_model import RootSystem
from app.services.root_system_service import build_root_system, parse_code

logger = logging.getLogger(__name__)


class RootSystemRepository:
    """
    Repository for root-system lookups.
    Caches every RootSystem it builds; instances are immutable and shared.
    """

    def __init__(self, max_rank: Optional[int] = None, max_weyl_order: Optional[int] = None):
        """
        Initialize repository with optional construction caps.

        Args:
            max_rank: Rank cap passed to build_root_system
            max_weyl_order: Weyl order cap passed to build_root_system
        """
        self.max_rank = max_rank
        self.max_weyl_order = max_weyl_order
        self._cache: Dict[str, RootSystem] = {}
        self._lock = Lock()

    def find_by_code(self, code: str) -> RootSystem:
        """
        Find a root system by its code, building it on first use.

        Args:
            code: Dynkin code such as "A1" or "G2"

        Returns:
            RootSystem entity
        """
        series, rank = parse_code(code)
        key = f"{series}{rank}"
        with self._lock:
            cached = self._cache.get(key)
            if cached is None:
                logger.debug("Root system cache miss for %s", key)
                cached = build_root_system(series, rank, self.max_rank, self.max_weyl_order)
                self._cache[key] = cached
        return cached

    def find_all_cached(self) -> List[RootSystem]:
        """Root systems built so far, sorted by code."""
        return sorted(self._cache.values(), key=lambda rs: rs.code)


# Shared instance used by the CLI and the HTTP routes
root_system_repository = RootSystemRepository()
