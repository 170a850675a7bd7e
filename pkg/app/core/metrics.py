"""Risk metrics over concern sets: RS, RSI, RCVS, AVPI and CSGP."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction

from pydantic import BaseModel, ConfigDict

from app.core.errors import EmptyDataset, ZeroTotalRisk
from app.core.model import AuditDataset, Concern, RootCauseCategory, risk_score
from app.core.riskmatrix import (
    TIERS_DESCENDING,
    ClassificationMode,
    RiskTier,
    classify,
)

logger = logging.getLogger(__name__)

OVERALL = "ALL"


class MetricsSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    standard: str
    n: int
    total_rs: int
    rsi: float
    rcvs_by_category: dict[RootCauseCategory, float]
    category_counts: dict[RootCauseCategory, int]
    mean_rcvs: float
    k: int
    avpi: float
    csgp_percent: float
    tier_counts: dict[RiskTier, int]
    classification_mode: ClassificationMode


def _category_totals(concerns: Sequence[Concern]) -> tuple[dict[RootCauseCategory, int], dict[RootCauseCategory, int]]:
    """Per-category (count, RS sum), in codebook order, non-empty categories only."""
    counts: dict[RootCauseCategory, int] = {}
    sums: dict[RootCauseCategory, int] = {}
    for category in RootCauseCategory:
        members = [c for c in concerns if c.category is category]
        if members:
            counts[category] = len(members)
            sums[category] = sum(risk_score(c) for c in members)
    return counts, sums


def compute_rsi(concerns: Sequence[Concern]) -> float:
    """Mean risk score over *concerns*.

    Raises:
        EmptyDataset: If *concerns* is empty.
    """
    if not concerns:
        raise EmptyDataset("RSI is undefined for zero concerns")
    return sum(risk_score(c) for c in concerns) / len(concerns)


def compute_rcvs(concerns: Sequence[Concern]) -> dict[RootCauseCategory, float]:
    """Each non-empty category's share of the total risk score.

    Raises:
        ZeroTotalRisk: If the total risk score is zero (no concerns).
    """
    total = sum(risk_score(c) for c in concerns)
    if total <= 0:
        raise ZeroTotalRisk("RCVS needs a positive total risk score")
    _, sums = _category_totals(concerns)
    return {category: rs / total for category, rs in sums.items()}


def compute_avpi(concerns: Sequence[Concern]) -> float:
    """Sum over categories of (count share x RCVS); lies in (0, 1].

    Raises:
        EmptyDataset: If *concerns* is empty.
        ZeroTotalRisk: If the total risk score is zero.
    """
    if not concerns:
        raise EmptyDataset("AVPI is undefined for zero concerns")
    counts, sums = _category_totals(concerns)
    total = sum(sums.values())
    if total <= 0:
        raise ZeroTotalRisk("AVPI needs a positive total risk score")
    weighted = sum(counts[category] * sums[category] for category in counts)
    return float(Fraction(weighted, len(concerns) * total))


def compute_csgp(
    concerns: Sequence[Concern], rule_mode: ClassificationMode = ClassificationMode.RULES
) -> float:
    """Percentage of concerns in the High or ExtremelyHigh tier.

    The E/H rule set is the default; ``rule_mode=GRID`` counts with the
    matrix instead.

    Raises:
        EmptyDataset: If *concerns* is empty.
    """
    if not concerns:
        raise EmptyDataset("CSGP is undefined for zero concerns")
    gap = sum(1 for c in concerns if classify(c.probability, c.severity, rule_mode) >= RiskTier.HIGH)
    return 100 * gap / len(concerns)


def tier_histogram(concerns: Sequence[Concern], mode: ClassificationMode) -> dict[RiskTier, int]:
    counts = {tier: 0 for tier in TIERS_DESCENDING}
    for c in concerns:
        counts[classify(c.probability, c.severity, mode)] += 1
    return counts


def summarize_concerns(
    standard: str,
    concerns: Sequence[Concern],
    mode: ClassificationMode = ClassificationMode.GRID,
) -> MetricsSummary:
    """Build one MetricsSummary for an already-filtered partition.

    Raises:
        EmptyDataset: If the partition is empty.
    """
    if not concerns:
        raise EmptyDataset(f"No Active concerns for standard '{standard}'")
    counts, sums = _category_totals(concerns)
    total = sum(sums.values())
    rcvs = compute_rcvs(concerns)
    # Exact mean of the shares; equals 1/k because the shares sum to one.
    mean_share = sum(Fraction(rs, total) for rs in sums.values()) / len(sums)
    return MetricsSummary(
        standard=standard,
        n=len(concerns),
        total_rs=sum(risk_score(c) for c in concerns),
        rsi=compute_rsi(concerns),
        rcvs_by_category=rcvs,
        category_counts=counts,
        mean_rcvs=float(mean_share),
        k=len(rcvs),
        avpi=compute_avpi(concerns),
        csgp_percent=compute_csgp(concerns),
        tier_counts=tier_histogram(concerns, mode),
        classification_mode=mode,
    )


def summarize(
    dataset: AuditDataset,
    by_standard: bool = True,
    mode: ClassificationMode = ClassificationMode.GRID,
) -> list[MetricsSummary]:
    """Summaries over Active concerns, one per standard or one overall.

    ``mode`` selects the classifier for ``tier_counts`` only; CSGP always
    uses the E/H rule set.

    Raises:
        EmptyDataset: If any partition has no Active concerns.
    """
    mode = ClassificationMode(mode)
    if not by_standard:
        return [summarize_concerns(OVERALL, dataset.active(), mode)]

    if not dataset.concerns:
        raise EmptyDataset("Dataset has no concerns")
    summaries = []
    for standard, concerns in dataset.partition().items():
        active = [c for c in concerns if c.is_active]
        logger.debug(f"Summarizing '{standard}': {len(active)} of {len(concerns)} concerns active")
        summaries.append(summarize_concerns(standard, active, mode))
    return summaries
