import csv
from pathlib import Path

import pytest

from etcs.blocks import catalog_by_id, default_catalog
from etcs.matching import enumerate_examples

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def blocks(catalog):
    return catalog_by_id(catalog)


@pytest.fixture(scope="session")
def examples(catalog):
    return enumerate_examples(catalog)


@pytest.fixture(scope="session")
def golden():
    with open(DATA / "golden_table.csv", newline="") as fh:
        return list(csv.DictReader(fh))
