import pytest

from toral_hopf.catalog import example_5_1, example_5_2


@pytest.fixture(scope="session")
def sys51():
    return example_5_1()


@pytest.fixture(scope="session")
def sys52():
    return example_5_2()
