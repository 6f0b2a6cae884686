"""
Worker pool for grid scans.

Every grid node is an independent fiber count, so nodes are fanned out to a
process pool and gathered back; results keep the row-major node order no
matter which worker finishes first.
"""
import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Tuple

from app.algebra.poly import PolyMap
from app.core.config import settings
from app.core.grid import GridSpec
from app.schemas import ScanPoint
from app.solvers.systems import FiberMode, fiber

logger = logging.getLogger(__name__)


def count_fiber(m: PolyMap, target: Tuple[Fraction, Fraction], mode: FiberMode) -> int:
    """Runs in a worker process; only the count travels back."""
    return fiber(m, target, mode).count


class ScanPool:
    """Fans grid nodes out to `concurrency` processes; 1 runs everything inline."""

    def __init__(self, concurrency: Optional[int] = None) -> None:
        self.concurrency = concurrency or settings.worker_concurrency

    async def scan(self, m: PolyMap, grid: GridSpec, mode: FiberMode = FiberMode.EXACT) -> List[ScanPoint]:
        mode = FiberMode(mode)
        targets = list(grid.points())
        logger.info("🔢 scanning %d targets of %s in %s mode with %d workers", len(targets), m.name, mode.value, self.concurrency)
        if self.concurrency == 1:
            counts = [count_fiber(m, t, mode) for t in targets]
        else:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=self.concurrency) as executor:
                jobs = [loop.run_in_executor(executor, count_fiber, m, t, mode) for t in targets]
                counts = await asyncio.gather(*jobs)
        logger.info("✅ scan of %s finished: %d targets", m.name, len(targets))
        return [ScanPoint(target=t, count=c, mode=mode) for t, c in zip(targets, counts)]


def run_scan(m: PolyMap, grid: GridSpec, mode: FiberMode = FiberMode.EXACT, concurrency: Optional[int] = None) -> List[ScanPoint]:
    """Synchronous entry point used by the CLI."""
    return asyncio.run(ScanPool(concurrency).scan(m, grid, mode))
