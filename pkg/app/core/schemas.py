from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, field_validator

from app.core.consensus import check_threshold
from app.core.ingest import IngestReport
from app.core.riskmatrix import ClassificationMode
from config import settings

Command = Literal["validate", "metrics", "classify", "alpha", "consensus", "plan", "report", "matrix-dump"]
ReportKind = Literal["tiers", "matrix", "rootcause", "rootcause-probability", "dataset", "rows"]


class RunConfig(BaseModel):
    """One CLI invocation: the command, its inputs and every flag."""

    command: Command
    inputs: list[str] = []
    mode: ClassificationMode = ClassificationMode(settings.classification_mode)
    threshold: float = settings.consensus_threshold
    panel_size: int | None = None
    seed: int = settings.seed
    budget: int | None = None
    output_format: str | None = None
    column_map: dict[str, str] = {}
    by_standard: bool = True
    standard: str | None = None
    kind: ReportKind | None = None
    out: str | None = None

    @field_validator("threshold")
    @classmethod
    def _threshold_in_range(cls, v: float) -> float:
        check_threshold(v)
        return v

    @field_validator("panel_size")
    @classmethod
    def _panel_positive(cls, v: int | None) -> int | None:
        if v is not None and v < 1:
            raise ValueError(f"Panel size must be at least 1, got {v}")
        return v

    @field_validator("budget")
    @classmethod
    def _budget_non_negative(cls, v: int | None) -> int | None:
        if v is not None and v < 0:
            raise ValueError(f"Budget must be non-negative, got {v}")
        return v

    @field_validator("column_map", mode="before")
    @classmethod
    def _parse_column_map(cls, v):
        """Accept ``["Sev=severity", ...]`` as well as a ready dict."""
        if v is None:
            return {}
        if isinstance(v, dict):
            return v
        mapping = {}
        for pair in v:
            source, sep, target = pair.partition("=")
            if not sep or not source.strip() or not target.strip():
                raise ValueError(f"Column mapping must look like col=field, got '{pair}'")
            mapping[source.strip()] = target.strip()
        return mapping


class PipelineResult(BaseModel):
    success: bool
    exit_code: int = 0
    warnings: list[str] = []
    errors: list[str] = []
    ingest: IngestReport | None = None
    output: bytes | None = None
