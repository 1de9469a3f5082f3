"""
gridforge - elliptic grids on ring domains

Builds orthogonal flux-aligned grids and conformal, adapted or monitor-metric
elliptic grids between two contour lines of a 2D flux function by streamline
integration, and checks them with geometric invariants and benchmark problems.
"""

__version__ = "0.1.0"
__author__ = "gridforge contributors"

from gridforge.pipeline import GridType, RunConfig, RunResult, run

__all__ = [
    "__version__",
    "GridType",
    "RunConfig",
    "RunResult",
    "run",
]
