import pytest

from app.core.ingest import write_concerns
from builders import comparative_dataset, dataset_from_blocks, NIST, NIST_BLOCKS, tier_count_dataset


@pytest.fixture
def nist_dataset():
    return dataset_from_blocks(NIST, NIST_BLOCKS)


@pytest.fixture
def comparative():
    return comparative_dataset()


@pytest.fixture
def tier_fixture():
    return tier_count_dataset()


@pytest.fixture
def write_csv(tmp_path):
    """Write a dataset (or raw text) to a CSV file and return its path."""

    def _write(content, name="concerns.csv"):
        path = tmp_path / name
        if isinstance(content, str):
            path.write_text(content, encoding="utf-8")
        else:
            path.write_bytes(write_concerns(content))
        return str(path)

    return _write
