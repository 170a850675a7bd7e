"""Aggregate datasets into the tables and count grids the reports present."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator

from app import __version__
from app.core.codebook import describe_codebook
from app.core.metrics import MetricsSummary
from app.core.model import AuditDataset, Concern, ProbabilityLevel, RootCauseCategory, SeverityLevel
from app.core.riskmatrix import (
    TIERS_DESCENDING,
    ClassificationDiffCell,
    ClassificationMode,
    RiskTier,
    classification_diff,
    classify,
    classify_grid,
    classify_rules,
    load_risk_matrix,
)


class TierCountRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    standard: str
    total: int
    extremely_high: int
    high: int
    medium: int
    low: int

    @model_validator(mode="after")
    def _total_matches(self):
        if self.total != self.extremely_high + self.high + self.medium + self.low:
            raise ValueError(f"Tier counts for '{self.standard}' do not add up to {self.total}")
        return self


class TierCountTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: tuple[TierCountRow, ...] = ()
    classification_mode: ClassificationMode = ClassificationMode.GRID

    def table_header(self) -> list[str]:
        return ["Document", "Total Concerns", "Extremely High", "High", "Medium", "Low"]

    def table_rows(self) -> list[list]:
        return [[r.standard, r.total, r.extremely_high, r.high, r.medium, r.low] for r in self.rows]


class HeatmapGrid(BaseModel):
    """Labelled count grid; risk matrices also carry RS and tier code per cell."""

    model_config = ConfigDict(frozen=True)

    title: str
    standard: str | None = None
    row_axis: str
    column_axis: str
    row_labels: tuple[str, ...]
    column_labels: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]
    cell_scores: tuple[tuple[int, ...], ...] | None = None
    cell_tiers: tuple[tuple[str, ...], ...] | None = None

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    @property
    def max_count(self) -> int:
        return max((max(row) for row in self.cells if row), default=0)

    def table_header(self) -> list[str]:
        return [f"{self.row_axis} / {self.column_axis}", *self.column_labels]

    def table_rows(self) -> list[list]:
        return [[label, *row] for label, row in zip(self.row_labels, self.cells)]


class MetricsReport(BaseModel):
    """The canonical metrics document: summaries plus the grid/rule diff."""

    model_config = ConfigDict(frozen=True)

    standards: tuple[MetricsSummary, ...]
    diff_cells: tuple[ClassificationDiffCell, ...] = ()
    tool_version: str = __version__

    def table_header(self) -> list[str]:
        return ["Standard", "RSI", "AVPI", "CSGP (%)", "Total Concerns", "RCVS"]

    def table_rows(self) -> list[list]:
        return [[s.standard, s.rsi, s.avpi, s.csgp_percent, s.n, s.mean_rcvs] for s in self.standards]


class ClassificationRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    standard: str
    probability: int
    severity: int
    risk_score: int
    grid_tier: str
    rule_tier: str
    disagree: bool


class ClassificationTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: tuple[ClassificationRow, ...] = ()

    def table_header(self) -> list[str]:
        return ["ID", "Standard", "Probability", "Severity", "RS", "Grid Tier", "Rule Tier", "Disagree"]

    def table_rows(self) -> list[list]:
        return [
            [r.id, r.standard, r.probability, r.severity, r.risk_score, r.grid_tier, r.rule_tier, r.disagree]
            for r in self.rows
        ]


def _in_scope(dataset: AuditDataset, standard: str | None) -> list[Concern]:
    return [c for c in dataset.active() if standard is None or c.standard == standard]


def tier_counts(
    dataset: AuditDataset,
    mode: ClassificationMode = ClassificationMode.GRID,
    standard: str | None = None,
) -> TierCountTable:
    """Per-standard tier counts over Active concerns, standards sorted.

    With *standard* set the table holds that standard's row only.
    """
    mode = ClassificationMode(mode)
    rows = []
    for name in dataset.standards:
        if standard is not None and name != standard:
            continue
        concerns = _in_scope(dataset, name)
        if not concerns:
            continue
        tiers = [classify(c.probability, c.severity, mode) for c in concerns]
        extremely_high, high, medium, low = (tiers.count(tier) for tier in TIERS_DESCENDING)
        rows.append(
            TierCountRow(
                standard=name, total=len(concerns),
                extremely_high=extremely_high, high=high, medium=medium, low=low,
            )
        )
    return TierCountTable(rows=tuple(rows), classification_mode=mode)


def matrix_grid(dataset: AuditDataset, standard: str | None = None) -> HeatmapGrid:
    """Severity x probability count grid in risk-matrix orientation."""
    severities = sorted(SeverityLevel, reverse=True)
    probabilities = sorted(ProbabilityLevel, reverse=True)
    counts = {(s, p): 0 for s in severities for p in probabilities}
    for c in _in_scope(dataset, standard):
        counts[(c.severity, c.probability)] += 1

    return HeatmapGrid(
        title=f"Risk matrix: {standard}" if standard else "Risk matrix: all standards",
        standard=standard,
        row_axis="Severity",
        column_axis="Probability",
        row_labels=tuple(f"{s.label} {s.numeral}" for s in severities),
        column_labels=tuple(f"{p.label} {p.letter}" for p in probabilities),
        cells=tuple(tuple(counts[(s, p)] for p in probabilities) for s in severities),
        cell_scores=tuple(tuple(int(p) * int(s) for p in probabilities) for s in severities),
        cell_tiers=tuple(tuple(classify_grid(p, s).code for p in probabilities) for s in severities),
    )


def rootcause_heatmap(
    dataset: AuditDataset,
    standard: str | None = None,
    mode: ClassificationMode = ClassificationMode.GRID,
    columns: Literal["tier", "probability"] = "tier",
) -> HeatmapGrid:
    """Root-cause categories against risk tier (or probability level)."""
    categories = list(RootCauseCategory)
    if columns == "probability":
        keys = sorted(ProbabilityLevel, reverse=True)
        labels = tuple(p.label for p in keys)

        def key_of(c: Concern):
            return c.probability
    else:
        keys = list(TIERS_DESCENDING)
        labels = tuple(t.label for t in keys)

        def key_of(c: Concern):
            return classify(c.probability, c.severity, mode)

    counts = {(cat, key): 0 for cat in categories for key in keys}
    for c in _in_scope(dataset, standard):
        counts[(c.category, key_of(c))] += 1

    scope = standard or "all standards"
    return HeatmapGrid(
        title=f"Root causes by {columns}: {scope}",
        standard=standard,
        row_axis="Root Cause",
        column_axis="Risk Tier" if columns == "tier" else "Probability",
        row_labels=tuple(cat.label for cat in categories),
        column_labels=labels,
        cells=tuple(tuple(counts[(cat, key)] for key in keys) for cat in categories),
    )


def classification_table(dataset: AuditDataset) -> ClassificationTable:
    """Grid and rule tiers side by side for every Active concern."""
    rows = []
    for c in dataset.active():
        grid_tier, rule_tier = classify_grid(c.probability, c.severity), classify_rules(c.probability, c.severity)
        rows.append(
            ClassificationRow(
                id=c.id,
                standard=c.standard,
                probability=int(c.probability),
                severity=int(c.severity),
                risk_score=c.risk_score,
                grid_tier=grid_tier.label,
                rule_tier=rule_tier.label,
                disagree=grid_tier is not rule_tier,
            )
        )
    return ClassificationTable(rows=tuple(rows))


class MatrixDump(BaseModel):
    """The loaded risk matrix with its codebook, as shipped to ``matrix-dump``."""

    model_config = ConfigDict(frozen=True)

    codebook: dict
    column_labels: tuple[str, ...]
    row_labels: tuple[str, ...]
    tiers: tuple[tuple[RiskTier, ...], ...]
    diff_cells: tuple[ClassificationDiffCell, ...] = ()

    def table_header(self) -> list[str]:
        return ["Severity / Probability", *self.column_labels]

    def table_rows(self) -> list[list]:
        return [[label, *(t.label for t in row)] for label, row in zip(self.row_labels, self.tiers)]


def matrix_dump() -> MatrixDump:
    rows = load_risk_matrix().rows()
    return MatrixDump(
        codebook=describe_codebook(),
        column_labels=tuple(f"{p.label} {p.letter}" for p in sorted(ProbabilityLevel, reverse=True)),
        row_labels=tuple(f"{s.label} {s.numeral}" for s, _ in rows),
        tiers=tuple(tuple(tiers) for _, tiers in rows),
        diff_cells=tuple(classification_diff()),
    )
