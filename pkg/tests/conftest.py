from importlib import resources
from pathlib import Path

import pytest

from zetaprod.zeros import load_zero_table

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def zeros_100_path():
    return DATA / "zeros_100.txt"


@pytest.fixture(scope="session")
def table100(zeros_100_path):
    return load_zero_table(zeros_100_path)


@pytest.fixture(scope="session")
def full_path():
    return Path(str(resources.files("zetaprod") / "data" / "zeros_100k.zrt"))


@pytest.fixture(scope="session")
def table(full_path):
    """First 10^5 zeros (bundled cache)."""
    return load_zero_table(full_path)


@pytest.fixture(scope="session")
def table1k(table):
    return table.prefix(1000)


@pytest.fixture(scope="session")
def table10k(table):
    return table.prefix(10_000)
