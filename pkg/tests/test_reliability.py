import itertools
import random
import time

import pytest

from app.core.errors import InsufficientData
from app.core.ingest import CoderTable
from app.core.reliability import coincidence_matrix, krippendorff_alpha_nominal
from builders import random_coder_table


def table(rows, coders=None):
    coders = coders or [f"c{i}" for i in range(len(rows[0]))]
    return CoderTable(
        item_ids=tuple(f"i{i}" for i in range(len(rows))),
        coder_ids=tuple(coders),
        codes=tuple(tuple(row) for row in rows),
    )


def oracle_alpha(t: CoderTable):
    """Pair-by-pair enumeration, independent of the coincidence matrix."""
    units = [[v for v in row if v is not None] for row in t.codes]
    units = [u for u in units if len(u) > 1]
    n = sum(len(u) for u in units)
    observed = 0.0
    for u in units:
        mismatches = sum(1 for i, j in itertools.permutations(range(len(u)), 2) if u[i] != u[j])
        observed += mismatches / (len(u) - 1)
    observed /= n
    pooled = [v for u in units for v in u]
    expected = sum(1 for i, j in itertools.permutations(range(n), 2) if pooled[i] != pooled[j]) / (n * (n - 1))
    return observed, expected


def test_perfect_agreement_is_one():
    rows = [[code] * 3 for code in "abcabcabca"]
    result = krippendorff_alpha_nominal(table(rows))
    assert result.alpha == 1.0
    assert result.observed_disagreement == 0.0
    assert not result.degenerate
    assert result.reliable


def test_hand_computed_value():
    result = krippendorff_alpha_nominal(table([["a", "a"], ["a", "b"], ["b", "b"], ["b", "b"]]))
    assert result.pairable_values == 8
    assert result.observed_disagreement == pytest.approx(0.25)
    assert result.expected_disagreement == pytest.approx(30 / 56)
    assert result.alpha == pytest.approx(8 / 15, abs=1e-12)
    assert not result.reliable


def test_two_by_two_matches_oracle():
    t = table([["0", "1"], ["1", "0"]])
    observed, expected = oracle_alpha(t)
    result = krippendorff_alpha_nominal(t)
    assert result.alpha == pytest.approx(1 - observed / expected, abs=1e-9)
    assert result.alpha < 0


def test_matches_oracle_on_random_tables():
    rng = random.Random(500)
    checked = 0
    for _ in range(500):
        t = random_coder_table(rng)
        observed, expected = oracle_alpha(t)
        result = krippendorff_alpha_nominal(t)
        assert result.observed_disagreement == pytest.approx(observed, abs=1e-9)
        assert result.expected_disagreement == pytest.approx(expected, abs=1e-9)
        if expected > 0:
            assert result.alpha == pytest.approx(1 - observed / expected, abs=1e-9)
            checked += 1
    assert checked > 490


def test_random_tables_under_five_seconds():
    rng = random.Random(501)
    tables = [random_coder_table(rng) for _ in range(500)]
    start = time.perf_counter()
    for t in tables:
        krippendorff_alpha_nominal(t)
    assert time.perf_counter() - start < 5.0


def test_binary_two_coder_tables_match_oracle():
    rng = random.Random(2)
    for _ in range(500):
        t = random_coder_table(rng, items=15, coders=2, codes="01", missing=0.0)
        observed, expected = oracle_alpha(t)
        if expected == 0:
            continue
        assert krippendorff_alpha_nominal(t).alpha == pytest.approx(1 - observed / expected, abs=1e-9)


def test_agrees_with_krippendorff_package():
    krippendorff = pytest.importorskip("krippendorff")
    np = pytest.importorskip("numpy")
    rng = random.Random(88)
    for _ in range(50):
        t = random_coder_table(rng)
        result = krippendorff_alpha_nominal(t)
        if result.degenerate:
            continue
        # The package wants coders x items with NaN for missing cells.
        codes = sorted({v for row in t.codes for v in row if v is not None})
        data = np.array(
            [[np.nan if row[j] is None else codes.index(row[j]) for row in t.codes] for j in range(len(t.coder_ids))],
            dtype=float,
        )
        expected = krippendorff.alpha(reliability_data=data, level_of_measurement="nominal")
        assert result.alpha == pytest.approx(expected, abs=1e-9)


def test_invariances():
    rng = random.Random(100)
    for _ in range(100):
        t = random_coder_table(rng)
        base = krippendorff_alpha_nominal(t).alpha

        rows = [list(r) for r in t.codes]
        rng.shuffle(rows)
        order = list(range(len(t.coder_ids)))
        rng.shuffle(order)
        permuted = table([[r[i] for i in order] for r in rows])
        assert krippendorff_alpha_nominal(permuted).alpha == pytest.approx(base, abs=1e-12)

        relabel = dict(zip("abcd", ["x", "yy", "z1", "0"]))
        relabeled = table([[relabel.get(v) for v in r] for r in t.codes])
        assert krippendorff_alpha_nominal(relabeled).alpha == pytest.approx(base, abs=1e-12)

        widened = table([[*r, None] for r in t.codes])
        assert krippendorff_alpha_nominal(widened).alpha == pytest.approx(base, abs=1e-12)


def test_coincidences_total_pairable_values():
    t = table([["a", "b", None], ["a", "a", "a"], ["b", None, None]])
    matrix = coincidence_matrix(t)
    assert sum(matrix.values()) == 5
    assert ("b", "b") not in matrix


def test_one_coder_is_insufficient():
    with pytest.raises(InsufficientData):
        krippendorff_alpha_nominal(table([["a"], ["b"]]))


def test_no_pairable_items_is_insufficient():
    with pytest.raises(InsufficientData):
        krippendorff_alpha_nominal(table([["a", None], [None, "b"]]))


def test_identical_values_are_degenerate():
    result = krippendorff_alpha_nominal(table([["yes", "yes"], ["yes", None], ["yes", "yes"]]))
    assert result.alpha == 1.0
    assert result.degenerate
    assert result.expected_disagreement == 0.0
    assert result.pairable_values == 4
