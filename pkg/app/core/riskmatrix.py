"""CRM risk-matrix classification: the lookup grid and the E/H rule set."""

from __future__ import annotations

import logging
from enum import Enum, IntEnum
from functools import lru_cache

from pydantic import BaseModel, ConfigDict

from app.core.codebook import load_codebook
from app.core.errors import MalformedFile
from app.core.model import Concern, ProbabilityLevel, SeverityLevel

logger = logging.getLogger(__name__)


class RiskTier(IntEnum):
    """Impact tier; integer order gives ExtremelyHigh > High > Medium > Low."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3
    EXTREMELY_HIGH = 4

    @property
    def code(self) -> str:
        return "LMHE"[self.value - 1]

    @property
    def label(self) -> str:
        return ("Low", "Medium", "High", "ExtremelyHigh")[self.value - 1]

    @classmethod
    def from_code(cls, code: str) -> RiskTier:
        try:
            return cls("LMHE".index(code.strip().upper()) + 1)
        except ValueError:
            raise MalformedFile(f"Unknown risk tier code: {code!r}") from None


# Highest tier first, the order used by tables and plans.
TIERS_DESCENDING = (
    RiskTier.EXTREMELY_HIGH,
    RiskTier.HIGH,
    RiskTier.MEDIUM,
    RiskTier.LOW,
)


class ClassificationMode(str, Enum):
    GRID = "grid"
    RULES = "rules"


class RiskMatrix(BaseModel):
    """Severity x probability grid of tiers (4 x 5 cells)."""

    model_config = ConfigDict(frozen=True)

    cells: dict[SeverityLevel, dict[ProbabilityLevel, RiskTier]]

    def tier(self, p: ProbabilityLevel, s: SeverityLevel) -> RiskTier:
        return self.cells[s][p]

    def rows(self) -> list[tuple[SeverityLevel, list[RiskTier]]]:
        """Rows in display order: Catastrophic first, columns Frequent first."""
        return [
            (s, [self.cells[s][p] for p in sorted(ProbabilityLevel, reverse=True)])
            for s in sorted(SeverityLevel, reverse=True)
        ]


def _check_monotone(cells: dict[SeverityLevel, dict[ProbabilityLevel, RiskTier]]) -> None:
    for s in SeverityLevel:
        for p in ProbabilityLevel:
            tier = cells[s][p]
            if p > ProbabilityLevel.UNLIKELY and cells[s][ProbabilityLevel(p - 1)] > tier:
                raise MalformedFile(f"Risk matrix not monotone in probability at P={int(p)}, S={int(s)}")
            if s > SeverityLevel.NEGLIGIBLE and cells[SeverityLevel(s - 1)][p] > tier:
                raise MalformedFile(f"Risk matrix not monotone in severity at P={int(p)}, S={int(s)}")


@lru_cache(maxsize=None)
def load_risk_matrix() -> RiskMatrix:
    """Build the grid from the codebook and check it is complete and monotone.

    Raises:
        MalformedFile: If a cell is missing, unknown, or breaks monotonicity.
    """
    spec = load_codebook()["risk_matrix"]
    columns = [ProbabilityLevel(v) for v in spec["columns"]]
    cells: dict[SeverityLevel, dict[ProbabilityLevel, RiskTier]] = {}
    for s in SeverityLevel:
        row = spec["rows"].get(str(int(s)))
        if row is None or len(row) != len(columns):
            raise MalformedFile(f"Risk matrix row for severity {int(s)} is missing or incomplete")
        cells[s] = {p: RiskTier.from_code(code) for p, code in zip(columns, row)}
    if any(set(row) != set(ProbabilityLevel) for row in cells.values()):
        raise MalformedFile("Risk matrix must cover all five probability levels")
    _check_monotone(cells)
    return RiskMatrix(cells=cells)


def classify_grid(p: ProbabilityLevel, s: SeverityLevel) -> RiskTier:
    """Tier from the CRM risk assessment matrix."""
    return load_risk_matrix().tier(ProbabilityLevel(p), SeverityLevel(s))


def _is_extremely_high(p: int, s: int) -> bool:
    return (p in (4, 5) and s == 4) or (p == 5 and s in (3, 4))


def _is_high(p: int, s: int) -> bool:
    return (
        (p in (3, 4) and s == 3)
        or (p in (2, 3) and s == 4)
        or (p in (4, 5) and s == 2)
    )


def classify_rules(p: ProbabilityLevel, s: SeverityLevel) -> RiskTier:
    """Tier from the E/H predicates; Medium/Low come from the grid.

    The predicates only define the two upper tiers, so any other cell is
    delegated to :func:`classify_grid`.
    """
    p, s = int(p), int(s)
    if _is_extremely_high(p, s):
        return RiskTier.EXTREMELY_HIGH
    if _is_high(p, s):
        return RiskTier.HIGH
    return classify_grid(ProbabilityLevel(p), SeverityLevel(s))


def classify(p: ProbabilityLevel, s: SeverityLevel, mode: ClassificationMode) -> RiskTier:
    if ClassificationMode(mode) is ClassificationMode.RULES:
        return classify_rules(p, s)
    return classify_grid(p, s)


def classify_concern(c: Concern, mode: ClassificationMode = ClassificationMode.GRID) -> RiskTier:
    return classify(c.probability, c.severity, mode)


class ClassificationDiffCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    probability: ProbabilityLevel
    severity: SeverityLevel
    grid_tier: RiskTier
    rule_tier: RiskTier


@lru_cache(maxsize=None)
def _diff_cells() -> tuple[ClassificationDiffCell, ...]:
    cells = []
    for s in sorted(SeverityLevel, reverse=True):
        for p in sorted(ProbabilityLevel, reverse=True):
            grid_tier, rule_tier = classify_grid(p, s), classify_rules(p, s)
            if grid_tier is not rule_tier:
                cells.append(
                    ClassificationDiffCell(probability=p, severity=s, grid_tier=grid_tier, rule_tier=rule_tier)
                )
    return tuple(cells)


def classification_diff() -> list[ClassificationDiffCell]:
    """Every (probability, severity) cell where the grid and the rules disagree."""
    return list(_diff_cells())
