import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import helpers  # noqa: E402


@pytest.fixture(scope="session")
def t4():
    return helpers.torus4()


@pytest.fixture(scope="session")
def t6():
    return helpers.torus6()


@pytest.fixture(scope="session")
def g1(t4):
    return helpers.gerbe4(1)


@pytest.fixture(scope="session")
def g2(t4):
    return helpers.gerbe4(2)


@pytest.fixture(scope="session")
def g4(t4):
    return helpers.gerbe4(4)


@pytest.fixture(scope="session")
def g6():
    return helpers.gerbe6()
