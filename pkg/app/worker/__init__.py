# Grid-scan worker pool

from .pool import ScanPool, run_scan

__all__ = ["ScanPool", "run_scan"]
