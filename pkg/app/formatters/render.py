"""Dispatch an aggregate to the requested output format."""

from __future__ import annotations

import logging
from enum import Enum

from app.core.errors import UnsupportedFormat
from app.core.report import HeatmapGrid, MetricsReport
from app.formatters.json_output import render_json
from app.formatters.svg import render_svg
from app.formatters.tables import render_csv, render_markdown
from app.formatters.text import render_text

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "md"
    SVG = "svg"
    TEXT = "text"

    @classmethod
    def parse(cls, raw: "str | OutputFormat") -> "OutputFormat":
        if isinstance(raw, cls):
            return raw
        name = str(raw).strip().lower()
        name = {"markdown": "md", "txt": "text"}.get(name, name)
        try:
            return cls(name)
        except ValueError:
            raise UnsupportedFormat(f"Unknown output format '{raw}'") from None


_TITLES = {
    "MetricsReport": "Comparative metrics",
    "TierCountTable": "Security concerns by document and assessed risk",
    "ClassificationTable": "Concern classification",
    "ConsensusReport": "Expert consensus",
    "IngestReport": "Ingest diagnostics",
    "AlphaResult": "Inter-coder reliability",
    "ValidationPlan": "Validation plan",
}


def _title(aggregate) -> str:
    if isinstance(aggregate, HeatmapGrid):
        return aggregate.title
    return _TITLES.get(type(aggregate).__name__, type(aggregate).__name__)


def _notes(aggregate) -> list[str]:
    if isinstance(aggregate, MetricsReport):
        notes = [
            f"Grid and rule classifiers disagree at P={int(cell.probability)}, S={int(cell.severity)} "
            f"(grid {cell.grid_tier.label}, rules {cell.rule_tier.label})."
            for cell in aggregate.diff_cells
        ]
        notes.append("RCVS column shows the mean share across non-empty root-cause categories.")
        return notes
    return []


def render(aggregate, fmt: "str | OutputFormat") -> bytes:
    """Serialize *aggregate* as UTF-8 bytes.

    Raises:
        UnsupportedFormat: If *fmt* is unknown or does not apply to the
            aggregate (SVG is for grids, text for results and reports).
    """
    fmt = OutputFormat.parse(fmt)
    logger.debug(f"Rendering {type(aggregate).__name__} as {fmt.value}")

    if fmt is OutputFormat.JSON:
        out = render_json(aggregate)
    elif fmt is OutputFormat.SVG:
        if not isinstance(aggregate, HeatmapGrid):
            raise UnsupportedFormat(f"SVG output is only available for grids, not {type(aggregate).__name__}")
        out = render_svg(aggregate)
    elif fmt is OutputFormat.TEXT:
        out = render_text(aggregate)
    elif not hasattr(aggregate, "table_rows"):
        raise UnsupportedFormat(f"{type(aggregate).__name__} has no tabular form")
    elif fmt is OutputFormat.CSV:
        out = render_csv(aggregate)
    else:
        out = render_markdown(aggregate, _title(aggregate), _notes(aggregate))
    return out.encode("utf-8")
