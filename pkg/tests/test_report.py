from collections import Counter

import pytest
from pydantic import ValidationError

from app.core.model import AuditDataset
from app.core.report import (
    TierCountRow,
    classification_table,
    matrix_dump,
    matrix_grid,
    rootcause_heatmap,
    tier_counts,
)
from app.core.riskmatrix import ClassificationMode, classify_grid
from builders import DATA, PROCESS, TIER_COUNT_ROWS, make_concern


def test_tier_count_table_rows(tier_fixture):
    table = tier_counts(tier_fixture, ClassificationMode.GRID)
    rows = {r.standard: (r.total, r.extremely_high, r.high, r.medium, r.low) for r in table.rows}
    assert rows == {
        "ICO": (30, 3, 16, 11, 0),
        "ALTAI": (78, 19, 30, 26, 3),
        "NIST": (28, 0, 17, 10, 1),
    }
    assert [r.standard for r in table.rows] == ["ALTAI", "ICO", "NIST"]


def test_matrix_grid_sums_match_tier_rows(tier_fixture):
    for standard, counts in TIER_COUNT_ROWS.items():
        grid = matrix_grid(tier_fixture, standard)
        assert grid.total == sum(counts)
        by_tier = Counter()
        for r, row in enumerate(grid.cells):
            for c, count in enumerate(row):
                by_tier[grid.cell_tiers[r][c]] += count
        assert (by_tier["E"], by_tier["H"], by_tier["M"], by_tier["L"]) == counts


def test_tier_counts_standard_filter(tier_fixture):
    (row,) = tier_counts(tier_fixture, standard="NIST").rows
    assert (row.standard, row.total) == ("NIST", 28)
    assert tier_counts(tier_fixture, standard="nowhere").rows == ()


def test_tier_counts_trivial_cases():
    assert tier_counts(AuditDataset()).rows == ()
    (row,) = tier_counts(AuditDataset(concerns=(make_concern(p=5, s=4),))).rows
    assert (row.total, row.extremely_high, row.high, row.medium, row.low) == (1, 1, 0, 0, 0)


def test_tier_counts_mode_moves_disputed_cell():
    dataset = AuditDataset(concerns=(make_concern(p=4, s=2),))
    (grid_row,) = tier_counts(dataset, ClassificationMode.GRID).rows
    (rule_row,) = tier_counts(dataset, ClassificationMode.RULES).rows
    assert (grid_row.high, grid_row.medium) == (0, 1)
    assert (rule_row.high, rule_row.medium) == (1, 0)


def test_tier_row_total_checked():
    with pytest.raises(ValidationError):
        TierCountRow(standard="X", total=3, extremely_high=1, high=1, medium=0, low=0)


def test_matrix_grid_single_cell():
    grid = matrix_grid(AuditDataset(concerns=(make_concern(p=3, s=2),)))
    # Rows run Catastrophic..Negligible, columns Frequent..Unlikely.
    assert grid.cells[2][2] == 1
    assert grid.total == 1
    assert grid.row_labels[0] == "Catastrophic I"
    assert grid.column_labels[0] == "Frequent A"
    assert grid.cell_tiers[0] == ("E", "E", "H", "H", "M")
    assert grid.cell_scores[0] == (20, 16, 12, 8, 4)
    assert grid.cell_scores[-1] == (5, 4, 3, 2, 1)


def test_grids_ignore_inactive(comparative):
    dataset = comparative.replace_concerns(
        [*comparative.concerns, make_concern("gone", p=5, s=4, status="Discarded")]
    )
    assert matrix_grid(dataset).total == len(comparative.active())
    assert rootcause_heatmap(dataset).total == len(comparative.active())


def test_rootcause_rows_are_category_counts(comparative):
    grid = rootcause_heatmap(comparative)
    counts = Counter(c.category for c in comparative.active())
    by_label = {category.label: count for category, count in counts.items()}
    for label, row in zip(grid.row_labels, grid.cells):
        assert sum(row) == by_label.get(label, 0)
    assert grid.column_labels == ("ExtremelyHigh", "High", "Medium", "Low")


def test_rootcause_single_category_has_one_row():
    dataset = AuditDataset(concerns=tuple(make_concern(f"c{i}", category=PROCESS, p=i % 5 + 1) for i in range(7)))
    grid = rootcause_heatmap(dataset, columns="probability")
    nonzero = [label for label, row in zip(grid.row_labels, grid.cells) if sum(row)]
    assert nonzero == [PROCESS.label]
    assert grid.column_axis == "Probability"
    assert grid.total == 7


def test_rootcause_standard_filter(comparative):
    grid = rootcause_heatmap(comparative, standard="ALTAI HLEG EC")
    assert grid.total == 28
    assert grid.standard == "ALTAI HLEG EC"


def test_classification_table_flags_disagreement():
    dataset = AuditDataset(concerns=(make_concern("a", p=4, s=2, category=DATA), make_concern("b", p=5, s=4)))
    rows = classification_table(dataset).rows
    assert [(r.id, r.grid_tier, r.rule_tier, r.disagree) for r in rows] == [
        ("a", "Medium", "High", True),
        ("b", "ExtremelyHigh", "ExtremelyHigh", False),
    ]
    assert rows[0].risk_score == 8


def test_matrix_dump_lists_tiers_and_codebook():
    dump = matrix_dump()
    assert len(dump.tiers) == 4 and all(len(row) == 5 for row in dump.tiers)
    assert dump.tiers[1][1] is classify_grid(4, 3)
    assert [d["label"] for d in dump.codebook["root_causes"]][2] == "Under-defined Process"
    assert len(dump.diff_cells) == 1
