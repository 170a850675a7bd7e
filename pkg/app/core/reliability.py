"""Krippendorff's alpha for nominal codes, with missing cells."""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, computed_field

from app.core.errors import InsufficientData
from app.core.ingest import CoderTable

logger = logging.getLogger(__name__)

# Conventional cut-off for acceptable agreement.
RELIABILITY_THRESHOLD = 0.8


class AlphaResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float
    observed_disagreement: float
    expected_disagreement: float
    pairable_values: int
    degenerate: bool = False

    @computed_field
    @property
    def reliable(self) -> bool:
        return self.alpha >= RELIABILITY_THRESHOLD

    def table_header(self) -> list[str]:
        return ["alpha", "observed_disagreement", "expected_disagreement", "pairable_values", "degenerate", "reliable"]

    def table_rows(self) -> list[list]:
        return [[
            self.alpha,
            self.observed_disagreement,
            self.expected_disagreement,
            self.pairable_values,
            self.degenerate,
            self.reliable,
        ]]


def _pairable_units(table: CoderTable) -> list[list[str]]:
    """Items with at least two non-missing codes; the rest cannot be paired."""
    return [values for values in table.item_values() if len(values) > 1]


def coincidence_matrix(table: CoderTable) -> dict[tuple[str, str], Fraction]:
    """Coincidences o[c, k] summed over pairable items.

    Each ordered pair of codes within an item with m values contributes
    1 / (m - 1). Row sums give n_c; the grand total equals the number of
    pairable values.
    """
    matrix: dict[tuple[str, str], Fraction] = {}
    for values in _pairable_units(table):
        weight = Fraction(1, len(values) - 1)
        counts = Counter(values)
        for c, n_c in counts.items():
            for k, n_k in counts.items():
                pairs = n_c * (n_k - 1) if c == k else n_c * n_k
                if pairs:
                    matrix[(c, k)] = matrix.get((c, k), Fraction(0)) + pairs * weight
    return matrix


def krippendorff_alpha_nominal(table: CoderTable) -> AlphaResult:
    """Nominal-level alpha over *table*.

    Observed disagreement is the share of off-diagonal coincidences;
    expected disagreement comes from the pooled code frequencies. When all
    pairable values share one code the expected disagreement is zero: the
    result is returned with ``alpha = 1.0`` and ``degenerate = True``.

    Raises:
        InsufficientData: If no item has two or more codes.
    """
    units = _pairable_units(table)
    if not units:
        raise InsufficientData("No item has two or more codes to compare")

    matrix = coincidence_matrix(table)
    n = sum(len(values) for values in units)
    marginals = Counter(value for values in units for value in values)

    disagreeing = sum(o for (c, k), o in matrix.items() if c != k)
    observed = disagreeing / n
    expected = Fraction(n * n - sum(n_c * n_c for n_c in marginals.values()), n * (n - 1))

    if expected == 0:
        logger.warning("All pairable values are identical; alpha defaults to 1.0")
        return AlphaResult(
            alpha=1.0,
            observed_disagreement=float(observed),
            expected_disagreement=0.0,
            pairable_values=n,
            degenerate=True,
        )

    return AlphaResult(
        alpha=float(1 - observed / expected),
        observed_disagreement=float(observed),
        expected_disagreement=float(expected),
        pairable_values=n,
    )
