"""Grid file container and SVG rendering."""

from gridforge.io.gridfile import (
    GRIDFILE_SCHEMA_VERSION,
    GridFile,
    dump_grid,
    grid_from_file,
    grid_to_file,
    load_grid_document,
    read_grid_file,
    write_grid_file,
)
from gridforge.io.svg import coordinate_lines, emit_svg, psi_contours

__all__ = [
    "GRIDFILE_SCHEMA_VERSION",
    "GridFile",
    "coordinate_lines",
    "dump_grid",
    "emit_svg",
    "grid_from_file",
    "grid_to_file",
    "load_grid_document",
    "psi_contours",
    "read_grid_file",
    "write_grid_file",
]
