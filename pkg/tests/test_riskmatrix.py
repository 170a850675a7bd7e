import itertools

import pytest

from app.core.model import ProbabilityLevel, SeverityLevel
from app.core.riskmatrix import (
    ClassificationMode,
    RiskTier,
    classification_diff,
    classify,
    classify_concern,
    classify_grid,
    classify_rules,
    load_risk_matrix,
)
from builders import make_concern

E, H, M, L = RiskTier.EXTREMELY_HIGH, RiskTier.HIGH, RiskTier.MEDIUM, RiskTier.LOW

# Severity 4..1 rows, probability 5..1 columns.
EXPECTED_GRID = {
    4: [E, E, H, H, M],
    3: [E, H, H, M, L],
    2: [H, M, M, L, L],
    1: [M, L, L, L, L],
}

ALL_CELLS = list(itertools.product(ProbabilityLevel, SeverityLevel))


def rule_oracle(p: int, s: int):
    if (p in (4, 5) and s == 4) or (p == 5 and s in (3, 4)):
        return E
    if (p in (3, 4) and s == 3) or (p in (2, 3) and s == 4) or (p in (4, 5) and s == 2):
        return H
    return None


@pytest.mark.parametrize("p, s", ALL_CELLS)
def test_grid_matches_matrix_table(p, s):
    assert classify_grid(p, s) is EXPECTED_GRID[int(s)][5 - int(p)]


@pytest.mark.parametrize("p, s", ALL_CELLS)
def test_rules_match_predicates(p, s):
    expected = rule_oracle(int(p), int(s))
    tier = classify_rules(p, s)
    if expected is None:
        assert tier is classify_grid(p, s)
        assert tier <= M
    else:
        assert tier is expected


@pytest.mark.parametrize(
    "p, s, tier",
    [(5, 4, E), (2, 3, M), (1, 1, L)],
)
def test_grid_examples(p, s, tier):
    assert classify_grid(ProbabilityLevel(p), SeverityLevel(s)) is tier


@pytest.mark.parametrize("p, s, tier", [(4, 4, E), (3, 3, H), (4, 2, H)])
def test_rule_examples(p, s, tier):
    assert classify_rules(ProbabilityLevel(p), SeverityLevel(s)) is tier


def test_diff_is_the_single_disputed_cell():
    diff = classification_diff()
    assert [(int(d.probability), int(d.severity), d.grid_tier, d.rule_tier) for d in diff] == [(4, 2, M, H)]


def test_extremely_high_agreement():
    agree = {
        (int(p), int(s))
        for p, s in ALL_CELLS
        if classify_grid(p, s) is E and classify_rules(p, s) is E
    }
    assert agree == {(5, 4), (4, 4), (5, 3)}


def test_grid_is_monotone():
    for p, s in ALL_CELLS:
        tier = classify_grid(p, s)
        if p > ProbabilityLevel.UNLIKELY:
            assert classify_grid(ProbabilityLevel(p - 1), s) <= tier
        if s > SeverityLevel.NEGLIGIBLE:
            assert classify_grid(p, SeverityLevel(s - 1)) <= tier


def test_matrix_rows_in_display_order():
    rows = load_risk_matrix().rows()
    assert [int(s) for s, _ in rows] == [4, 3, 2, 1]
    assert [t.code for t in rows[0][1]] == list("EEHHM")


def test_tier_order_and_codes():
    assert E > H > M > L
    assert [t.code for t in (E, H, M, L)] == list("EHML")
    assert RiskTier.from_code("h") is H


def test_classification_ignores_concern_identity():
    a = make_concern("a", "X", p=4, s=2, section="9")
    b = make_concern("b", "Y", p=4, s=2)
    for mode in ClassificationMode:
        assert classify_concern(a, mode) is classify_concern(b, mode)
    assert classify(4, 2, "grid") is M
    assert classify(4, 2, "rules") is H
