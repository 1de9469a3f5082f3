"""
Pytest configuration and fixtures for gridforge tests.

The annulus psi = (x^2 + y^2) / 2 between psi = 0.5 and psi = 2 (radii 1 and 2)
has closed-form orthogonal and conformal grids, so most numerical checks run on
it at small resolutions.
"""

from collections.abc import Generator

import pytest

from gridforge.config import get_settings
from gridforge.flux.fields import AnnulusField, HarmonicLogField, SolovevField
from gridforge.grids.models import FluxAlignedGrid, Placement
from gridforge.grids.orthogonal import generate_orthogonal
from gridforge.ode.angle import ThetaFrame
from gridforge.solver.chi import ConformalChi
from gridforge.solver.ubar import ScalarField2, solve_ubar

ANNULUS_PSI0 = 0.5
ANNULUS_PSI1 = 2.0


@pytest.fixture(autouse=True)
def clear_settings_cache() -> Generator[None, None, None]:
    """Settings read the environment once; tests that patch it need a fresh copy."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def annulus() -> AnnulusField:
    return AnnulusField()


@pytest.fixture(scope="session")
def shifted_annulus() -> AnnulusField:
    """Annulus centered at (10, 0) so every grid point has x > 0."""
    return AnnulusField(center=(10.0, 0.0))


@pytest.fixture(scope="session")
def harmonic() -> HarmonicLogField:
    return HarmonicLogField()


@pytest.fixture(scope="session")
def solovev() -> SolovevField:
    return SolovevField()


@pytest.fixture(scope="session")
def origin_frame() -> ThetaFrame:
    return ThetaFrame(x0=0.0, y0=0.0)


@pytest.fixture(scope="session")
def annulus_vertex_grid(annulus: AnnulusField, origin_frame: ThetaFrame) -> FluxAlignedGrid:
    """Vertex-placed orthogonal annulus grid, 16 x 64 cells."""
    return generate_orthogonal(
        annulus,
        ANNULUS_PSI0,
        ANNULUS_PSI1,
        16,
        64,
        frame=origin_frame,
        placement=Placement.VERTICES,
    )


@pytest.fixture(scope="session")
def annulus_ubar(annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid) -> ScalarField2:
    return solve_ubar(annulus_vertex_grid, ConformalChi(), field=annulus)
