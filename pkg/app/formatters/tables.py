"""Table formatter: renders tabular aggregates as markdown or CSV."""

from __future__ import annotations

import csv
import io

from app.formatters.templating import render_template


def _cell(value) -> str:
    """CSV keeps full precision; booleans become true/false."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    return str(value)


def render_markdown(aggregate, title: str, notes: list[str] | None = None) -> str:
    """Render *aggregate* as a markdown table.

    Floats are shown at two decimals, rounded half-to-even; the
    aggregate itself is not modified.

    Args:
        aggregate: Any object exposing ``table_header()`` and ``table_rows()``.
        title: Heading placed above the table.
        notes: Optional paragraphs appended after the table.
    """
    return render_template(
        "table.md.j2",
        title=title,
        header=aggregate.table_header(),
        rows=aggregate.table_rows(),
        notes=notes or [],
    )


def render_csv(aggregate) -> str:
    buffer = io.StringIO(newline="")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(aggregate.table_header())
    for row in aggregate.table_rows():
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()
