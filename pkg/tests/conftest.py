import random
from pathlib import Path

import pytest
from hypothesis import settings

from lgtypes.sampling import DEFAULT_SEED
from lgtypes.textio import parse_algebra

DATA = Path(__file__).parent / "data"

settings.register_profile("repro", deadline=None, derandomize=True, max_examples=100)
settings.load_profile("repro")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized tests")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


def corpus():
    """The algebras under tests/data, sorted by file name."""
    return [parse_algebra(p.read_text()) for p in sorted(DATA.glob("*.alg"))]
