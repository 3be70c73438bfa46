"""Figure rendering for benchmark result CSVs."""

from .figures import (
    EXPECTED_COLUMNS,
    FigureSpec,
    build_figure,
    family_of,
    panel_points,
    read_table,
    render_figures,
)

__all__ = [
    "EXPECTED_COLUMNS",
    "FigureSpec",
    "build_figure",
    "family_of",
    "panel_points",
    "read_table",
    "render_figures",
]
