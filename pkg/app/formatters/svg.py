"""SVG formatter: cell-shaded grids for risk matrices and heatmaps."""

from __future__ import annotations

from app.core.report import HeatmapGrid
from app.formatters.templating import render_template

CELL_WIDTH = 110
CELL_HEIGHT = 40
HEADER_HEIGHT = 60
CHAR_WIDTH = 7

TIER_FILLS = {
    "E": "#b2182b",
    "H": "#ef8a62",
    "M": "#f4c542",
    "L": "#67a9cf",
}
DEFAULT_FILL = "#b2182b"


def render_svg(grid: HeatmapGrid) -> str:
    """Draw *grid* with opacity proportional to each cell's count.

    Risk-matrix grids are coloured by their tier; other grids use a single
    hue.
    """
    label_width = CHAR_WIDTH * max((len(label) for label in grid.row_labels), default=0) + 24
    max_count = grid.max_count

    cells = []
    for r, (row_label, row) in enumerate(zip(grid.row_labels, grid.cells)):
        for c, count in enumerate(row):
            tier = grid.cell_tiers[r][c] if grid.cell_tiers else None
            cells.append({
                "row_label": row_label,
                "column": c,
                "x": label_width + c * CELL_WIDTH,
                "y": HEADER_HEIGHT + r * CELL_HEIGHT,
                "fill": TIER_FILLS.get(tier, DEFAULT_FILL),
                "opacity": f"{(count / max_count) if max_count else 0.0:.3f}",
                "label": f"{tier} {count}" if tier else str(count),
            })

    return render_template(
        "heatmap.svg.j2",
        grid=grid,
        cells=cells,
        max_count=max_count,
        label_width=label_width,
        cell_width=CELL_WIDTH,
        cell_height=CELL_HEIGHT,
        header_height=HEADER_HEIGHT,
        width=label_width + CELL_WIDTH * len(grid.column_labels) + 20,
        height=HEADER_HEIGHT + CELL_HEIGHT * len(grid.row_labels) + 20,
    )
