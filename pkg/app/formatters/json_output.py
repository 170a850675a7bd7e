"""JSON formatter: the canonical machine-readable output."""

from __future__ import annotations

import json

from pydantic import BaseModel

from app.core.metrics import MetricsSummary
from app.core.report import HeatmapGrid, MatrixDump, MetricsReport
from app.core.riskmatrix import ClassificationDiffCell
from config import settings


def _summary_document(summary: MetricsSummary) -> dict:
    return {
        "standard": summary.standard,
        "n": summary.n,
        "total_rs": summary.total_rs,
        "rsi": summary.rsi,
        "avpi": summary.avpi,
        "csgp_percent": summary.csgp_percent,
        "rcvs": {category.value: share for category, share in summary.rcvs_by_category.items()},
        "category_counts": {category.value: count for category, count in summary.category_counts.items()},
        "mean_rcvs": summary.mean_rcvs,
        "k": summary.k,
        "tier_counts": {tier.label: count for tier, count in summary.tier_counts.items()},
        "classification_mode": summary.classification_mode.value,
    }


def diff_cell_document(cell: ClassificationDiffCell) -> dict:
    return {
        "probability": int(cell.probability),
        "severity": int(cell.severity),
        "grid_tier": cell.grid_tier.label,
        "rule_tier": cell.rule_tier.label,
    }


def to_document(aggregate) -> dict | list:
    """Plain JSON-ready structure for *aggregate*."""
    if isinstance(aggregate, MetricsReport):
        return {
            "standards": [_summary_document(s) for s in aggregate.standards],
            "diff_cells": [diff_cell_document(cell) for cell in aggregate.diff_cells],
            "tool_version": aggregate.tool_version,
        }
    if isinstance(aggregate, MatrixDump):
        return {
            "codebook": aggregate.codebook,
            "risk_matrix": {
                "columns": list(aggregate.column_labels),
                "rows": [
                    {"severity": label, "tiers": [tier.label for tier in row]}
                    for label, row in zip(aggregate.row_labels, aggregate.tiers)
                ],
            },
            "diff_cells": [diff_cell_document(cell) for cell in aggregate.diff_cells],
        }
    if isinstance(aggregate, HeatmapGrid):
        return {**aggregate.model_dump(mode="json"), "total": aggregate.total}
    if isinstance(aggregate, BaseModel):
        return aggregate.model_dump(mode="json")
    if isinstance(aggregate, dict):
        return aggregate
    raise TypeError(f"Cannot serialize {type(aggregate).__name__} to JSON")


def render_json(aggregate) -> str:
    """Serialize at full float precision, keys in schema order."""
    return json.dumps(to_document(aggregate), indent=settings.json_indent, ensure_ascii=False) + "\n"
