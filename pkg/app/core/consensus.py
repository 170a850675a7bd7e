"""Expert validation: verdict tallying, rejection removal, validation sampling."""

from __future__ import annotations

import logging
import random
from fractions import Fraction

from pydantic import BaseModel, ConfigDict

from app.core.errors import InvalidThreshold
from app.core.model import (
    AuditDataset,
    BallotOutcome,
    ConcernStatus,
    ExpertBallot,
    Verdict,
)
from app.core.riskmatrix import TIERS_DESCENDING, ClassificationMode, RiskTier, classify_concern

logger = logging.getLogger(__name__)


class ValidationPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    selected: tuple[str, ...]
    budget: int
    seed: int

    def table_header(self) -> list[str]:
        return ["Rank", "ID"]

    def table_rows(self) -> list[list]:
        return [[rank, concern_id] for rank, concern_id in enumerate(self.selected, start=1)]


class ConsensusRow(BaseModel):
    """Verdict mix and outcome for one balloted concern."""

    model_config = ConfigDict(frozen=True)

    id: str
    standard: str
    confirmed: int
    plausible: int
    rejected: int
    outcome: BallotOutcome
    status: ConcernStatus


class ConsensusReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: tuple[ConsensusRow, ...] = ()
    threshold: float
    panel_size: int | None = None

    def table_header(self) -> list[str]:
        return ["ID", "Standard", "Confirmed", "Plausible", "Rejected", "Outcome", "Status"]

    def table_rows(self) -> list[list]:
        return [
            [r.id, r.standard, r.confirmed, r.plausible, r.rejected, r.outcome.value, r.status.value]
            for r in self.rows
        ]


def check_threshold(threshold: float) -> Fraction:
    """Parse *threshold* exactly and require it in (0, 1]."""
    try:
        value = Fraction(str(threshold))
    except (TypeError, ValueError):
        raise InvalidThreshold(f"Threshold must be a number, got {threshold!r}") from None
    if not 0 < value <= 1:
        raise InvalidThreshold(f"Threshold must lie in (0, 1], got {threshold}")
    return value


def tally(ballot: ExpertBallot, threshold: float = 0.75, panel_size: int | None = None) -> BallotOutcome:
    """Decide a ballot: Accepted, Rejected or Pending.

    Confirmed and Plausible verdicts both count as concurrence. A ballot is
    Accepted once concurrence / panel reaches *threshold*; otherwise it is
    Rejected when every panel member has voted and Pending before that.

    Args:
        ballot: The verdicts cast so far.
        threshold: Required concurrence fraction in (0, 1].
        panel_size: Experts on the panel; defaults to the number of verdicts.

    Raises:
        InvalidThreshold: If *threshold* is outside (0, 1] or the panel is
            empty.
    """
    required = check_threshold(threshold)
    cast = len(ballot.verdicts)
    panel = max(panel_size if panel_size is not None else cast, cast)
    if panel < 1:
        raise InvalidThreshold("Panel size must be at least 1")

    if Fraction(ballot.concurrence, panel) >= required:
        return BallotOutcome.ACCEPTED
    if cast >= panel:
        return BallotOutcome.REJECTED
    return BallotOutcome.PENDING


def apply_consensus(
    dataset: AuditDataset, threshold: float = 0.75, panel_size: int | None = None
) -> AuditDataset:
    """Tally every ballot and mark Active concerns the panel rejected.

    Only ``status`` and the ballot outcome change; concerns without a
    ballot are returned untouched.
    """
    check_threshold(threshold)
    updated = []
    rejected = 0
    for concern in dataset.concerns:
        if concern.ballot is None:
            updated.append(concern)
            continue
        outcome = tally(concern.ballot, threshold, panel_size)
        changes: dict = {"ballot": concern.ballot.model_copy(update={"outcome": outcome})}
        if outcome is BallotOutcome.REJECTED and concern.is_active:
            changes["status"] = ConcernStatus.REJECTED_BY_EXPERTS
            rejected += 1
        updated.append(concern.model_copy(update=changes))

    if rejected:
        logger.warning(f"Expert panel rejected {rejected} concern(s); they are excluded from metrics")
    return dataset.replace_concerns(updated)


def consensus_rows(dataset: AuditDataset) -> list[ConsensusRow]:
    """Per-concern verdict mix for every balloted concern, in dataset order."""
    rows = []
    for concern in dataset.concerns:
        if concern.ballot is None:
            continue
        counts = concern.ballot.verdict_counts()
        rows.append(
            ConsensusRow(
                id=concern.id,
                standard=concern.standard,
                confirmed=counts[Verdict.CONFIRMED],
                plausible=counts[Verdict.PLAUSIBLE],
                rejected=counts[Verdict.REJECTED],
                outcome=concern.ballot.outcome,
                status=concern.status,
            )
        )
    return rows


def plan_validation(
    dataset: AuditDataset,
    budget: int,
    seed: int = 0,
    mode: ClassificationMode = ClassificationMode.GRID,
) -> ValidationPlan:
    """Pick up to *budget* Active concerns for expert review.

    ExtremelyHigh concerns come first, then High, then the remaining tiers;
    order within a tier is a shuffle seeded by *seed*.
    """
    if budget < 0:
        raise ValueError(f"Budget must be non-negative, got {budget}")

    rng = random.Random(seed)
    by_tier: dict[RiskTier, list[str]] = {tier: [] for tier in TIERS_DESCENDING}
    for concern in dataset.active():
        by_tier[classify_concern(concern, mode)].append(concern.id)

    ordered: list[str] = []
    for tier in TIERS_DESCENDING:
        ids = by_tier[tier]
        rng.shuffle(ids)
        ordered.extend(ids)

    return ValidationPlan(selected=tuple(ordered[:budget]), budget=budget, seed=seed)
