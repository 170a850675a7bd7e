"""Domain types for audited concerns and the scales they are scored on."""

from __future__ import annotations

import re
from collections import Counter
from enum import Enum, IntEnum
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.codebook import load_codebook
from app.core.errors import UnknownRootCause, UnknownScaleValue


def canonical_token(text: str) -> str:
    """Lowercase *text* and drop everything but letters and digits.

    ``"Under-defined Process"`` and ``"UnderDefinedProcess"`` both become
    ``"underdefinedprocess"``.
    """
    return re.sub(r"[^a-z0-9]", "", text.lower())


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------

class ProbabilityLevel(IntEnum):
    UNLIKELY = 1
    SELDOM = 2
    OCCASIONAL = 3
    LIKELY = 4
    FREQUENT = 5

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @property
    def letter(self) -> str:
        """CRM column letter: A = Frequent ... E = Unlikely."""
        return "ABCDE"[5 - self.value]


class SeverityLevel(IntEnum):
    NEGLIGIBLE = 1
    MODERATE = 2
    CRITICAL = 3
    CATASTROPHIC = 4

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @property
    def numeral(self) -> str:
        """CRM row numeral: I = Catastrophic ... IV = Negligible."""
        return ("I", "II", "III", "IV")[4 - self.value]


class RootCauseCategory(str, Enum):
    DATA_VULNERABILITY = "DataVulnerability"
    UNENFORCEABLE_SECURITY_CONTROL = "UnenforceableSecurityControl"
    UNDER_DEFINED_PROCESS = "UnderDefinedProcess"
    AMBIGUOUS_SPECIFICATION = "AmbiguousSpecification"

    @property
    def label(self) -> str:
        """Codebook label, e.g. ``"Under-defined Process"``."""
        return _root_cause_entries()[self.value]["label"]

    @property
    def description(self) -> str:
        return _root_cause_entries()[self.value]["description"]


class ConcernStatus(str, Enum):
    ACTIVE = "Active"
    DISCARDED = "Discarded"
    REJECTED_BY_EXPERTS = "RejectedByExperts"


class Verdict(str, Enum):
    CONFIRMED = "Confirmed"
    PLAUSIBLE = "Plausible"
    REJECTED = "Rejected"


class BallotOutcome(str, Enum):
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"
    PENDING = "Pending"


# ---------------------------------------------------------------------------
# Scale normalization
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _root_cause_entries() -> dict[str, dict]:
    return {rc["category"]: rc for rc in load_codebook()["root_causes"]}


@lru_cache(maxsize=None)
def _probability_lookup() -> dict[str, ProbabilityLevel]:
    lookup: dict[str, ProbabilityLevel] = {}
    for entry in load_codebook()["probability"]:
        level = ProbabilityLevel(entry["value"])
        lookup[canonical_token(entry["label"])] = level
        lookup[canonical_token(entry["letter"])] = level
    return lookup


@lru_cache(maxsize=None)
def _severity_lookup() -> dict[str, SeverityLevel]:
    lookup: dict[str, SeverityLevel] = {}
    for entry in load_codebook()["severity"]:
        level = SeverityLevel(entry["value"])
        for name in (entry["label"], entry["numeral"], *entry.get("aliases", [])):
            lookup[canonical_token(name)] = level
    return lookup


@lru_cache(maxsize=None)
def _root_cause_lookup() -> dict[str, RootCauseCategory]:
    lookup: dict[str, RootCauseCategory] = {}
    for category in RootCauseCategory:
        lookup[canonical_token(category.value)] = category
        lookup[canonical_token(category.label)] = category
    return lookup


def _as_int(raw: object) -> int | None:
    """Return *raw* as an int when it is an integer or a string of digits."""
    if isinstance(raw, bool):
        return None
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str) and re.fullmatch(r"[+-]?\d+", raw.strip()):
        return int(raw.strip())
    return None


def normalize_probability(raw: str | int) -> ProbabilityLevel:
    """Resolve a label, CRM letter (A-E) or integer 1-5 to a ProbabilityLevel.

    Raises:
        UnknownScaleValue: If *raw* matches nothing on the scale.
    """
    if isinstance(raw, ProbabilityLevel):
        return raw
    number = _as_int(raw)
    if number is not None:
        try:
            return ProbabilityLevel(number)
        except ValueError:
            raise UnknownScaleValue(f"Probability {number} is outside 1..5") from None
    if isinstance(raw, str):
        level = _probability_lookup().get(canonical_token(raw))
        if level is not None:
            return level
    raise UnknownScaleValue(f"Unknown probability value: {raw!r}")


def normalize_severity(raw: str | int) -> SeverityLevel:
    """Resolve a label, alias, CRM numeral (I-IV) or integer 1-4 to a SeverityLevel.

    ``"Marginal"`` maps to Moderate and ``"Significant"`` to Critical.

    Raises:
        UnknownScaleValue: If *raw* matches nothing on the scale.
    """
    if isinstance(raw, SeverityLevel):
        return raw
    number = _as_int(raw)
    if number is not None:
        try:
            return SeverityLevel(number)
        except ValueError:
            raise UnknownScaleValue(f"Severity {number} is outside 1..4") from None
    if isinstance(raw, str):
        level = _severity_lookup().get(canonical_token(raw))
        if level is not None:
            return level
    raise UnknownScaleValue(f"Unknown severity value: {raw!r}")


def normalize_root_cause(raw: str) -> RootCauseCategory:
    if isinstance(raw, RootCauseCategory):
        return raw
    category = _root_cause_lookup().get(canonical_token(str(raw)))
    if category is None:
        raise UnknownRootCause(f"Unknown root cause: {raw!r}")
    return category


def normalize_status(raw: str | None) -> ConcernStatus:
    if isinstance(raw, ConcernStatus):
        return raw
    if raw is None or not raw.strip():
        return ConcernStatus.ACTIVE
    token = canonical_token(raw)
    for status in ConcernStatus:
        if canonical_token(status.value) == token:
            return status
    raise ValueError(f"Unknown status: {raw!r}")


def normalize_verdict(raw: str) -> Verdict | None:
    """Return the verdict for an expert cell, or None for a blank cell."""
    if isinstance(raw, Verdict):
        return raw
    if raw is None or not raw.strip():
        return None
    token = canonical_token(raw)
    for verdict in Verdict:
        if canonical_token(verdict.value) == token:
            return verdict
    raise ValueError(f"Unknown expert verdict: {raw!r}")


# ---------------------------------------------------------------------------
# Value objects
# ---------------------------------------------------------------------------

class RootCause(BaseModel):
    model_config = ConfigDict(frozen=True)

    category: RootCauseCategory
    freeform_note: str | None = None

    @field_validator("category", mode="before")
    @classmethod
    def _normalize_category(cls, value):
        return normalize_root_cause(value)


class ExpertBallot(BaseModel):
    """Per-expert verdicts on one concern plus the tallied outcome."""

    model_config = ConfigDict(frozen=True)

    verdicts: dict[str, Verdict]
    outcome: BallotOutcome = BallotOutcome.PENDING

    def verdict_counts(self) -> dict[Verdict, int]:
        counts = Counter(self.verdicts.values())
        return {verdict: counts.get(verdict, 0) for verdict in Verdict}

    @property
    def concurrence(self) -> int:
        """Number of Confirmed or Plausible verdicts."""
        return sum(1 for v in self.verdicts.values() if v is not Verdict.REJECTED)


class Concern(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    standard: str = Field(min_length=1)
    section: str = ""
    quoted_text: str = ""
    description: str = ""
    root_cause: RootCause
    probability: ProbabilityLevel
    severity: SeverityLevel
    status: ConcernStatus = ConcernStatus.ACTIVE
    ballot: ExpertBallot | None = None

    @field_validator("probability", mode="before")
    @classmethod
    def _normalize_probability(cls, value):
        return normalize_probability(value)

    @field_validator("severity", mode="before")
    @classmethod
    def _normalize_severity(cls, value):
        return normalize_severity(value)

    @property
    def category(self) -> RootCauseCategory:
        return self.root_cause.category

    @property
    def risk_score(self) -> int:
        return risk_score(self)

    @property
    def is_active(self) -> bool:
        return self.status is ConcernStatus.ACTIVE


def risk_score(c: Concern) -> int:
    """RS = probability x severity, always within 1..20."""
    return int(c.probability) * int(c.severity)


class AuditDataset(BaseModel):
    """An ordered, id-unique collection of concerns across standards."""

    model_config = ConfigDict(frozen=True)

    concerns: tuple[Concern, ...] = ()

    @model_validator(mode="after")
    def _unique_ids(self):
        seen: set[str] = set()
        for concern in self.concerns:
            if concern.id in seen:
                raise ValueError(f"Duplicate concern id: {concern.id}")
            seen.add(concern.id)
        return self

    @property
    def n(self) -> int:
        return len(self.concerns)

    @property
    def standards(self) -> tuple[str, ...]:
        """Distinct document identifiers, sorted lexicographically."""
        return tuple(sorted({c.standard for c in self.concerns}))

    def active(self) -> tuple[Concern, ...]:
        return tuple(c for c in self.concerns if c.is_active)

    def for_standard(self, standard: str) -> tuple[Concern, ...]:
        return tuple(c for c in self.concerns if c.standard == standard)

    def partition(self) -> dict[str, tuple[Concern, ...]]:
        """Concerns grouped by standard, in sorted standard order."""
        return {standard: self.for_standard(standard) for standard in self.standards}

    def replace_concerns(self, concerns) -> AuditDataset:
        return AuditDataset(concerns=tuple(concerns))
