"""Plain key=value output for the reliability, ingest and plan results."""

from __future__ import annotations

from app.core.consensus import ValidationPlan
from app.core.errors import UnsupportedFormat
from app.core.ingest import IngestReport
from app.core.reliability import AlphaResult
from app.formatters.templating import render_template

_TEMPLATES = {
    AlphaResult: ("alpha.txt.j2", "result"),
    IngestReport: ("ingest_report.txt.j2", "report"),
    ValidationPlan: ("plan.txt.j2", "plan"),
}


def render_text(aggregate) -> str:
    entry = _TEMPLATES.get(type(aggregate))
    if entry is None:
        raise UnsupportedFormat(f"No text format for {type(aggregate).__name__}")
    template, name = entry
    return render_template(template, **{name: aggregate})
