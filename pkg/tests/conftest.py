import pytest

from copulasched import PaperPiecewise, clayton, independent


@pytest.fixture(scope="session")
def f_ind():
    return PaperPiecewise(1.715, 0.76)


@pytest.fixture(scope="session")
def f_two():
    return PaperPiecewise(2.2468, 0.7607)


@pytest.fixture(scope="session")
def ind(f_ind):
    return independent(f_ind)


@pytest.fixture(scope="session")
def clay2(f_two):
    return clayton(2, f_two)
