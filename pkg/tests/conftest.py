import json
from pathlib import Path

import pytest

from knead.mapfile import bundled_maps, load_map

DATA = Path(__file__).parent / "data"
FROZEN = Path(__file__).parent / "frozen" / "oracle_values.json"


@pytest.fixture(scope="session")
def corpus():
    return bundled_maps()


@pytest.fixture(scope="session")
def induced(corpus):
    return {name: d.induced_map() for name, d in corpus.items()}


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN.read_text())


def data_map(name):
    return load_map(DATA / f"{name}.json")
