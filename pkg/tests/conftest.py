import os
import pathlib
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

SEED = int(os.environ.get("NOMFIX_SEED", "2024"))


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def data_dir():
    return pathlib.Path(__file__).parent / "data"
