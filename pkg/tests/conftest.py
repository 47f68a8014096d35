import pytest

from lcframe import catalog


@pytest.fixture(scope="session")
def sphere():
    return catalog.load("sphere")


@pytest.fixture(scope="session")
def mixed_bowl():
    return catalog.load("mixed_bowl")


@pytest.fixture(scope="session")
def twisted_band():
    return catalog.load("twisted_band")


@pytest.fixture(scope="session")
def timelike_trough():
    return catalog.load("timelike_trough")


@pytest.fixture(scope="session")
def flared_trough():
    return catalog.load("flared_trough")


@pytest.fixture(scope="session")
def parabolic_cone():
    return catalog.load("parabolic_cone")


@pytest.fixture(scope="session")
def cubic_cone():
    return catalog.load("cubic_cone")


@pytest.fixture(scope="session")
def flat_plane():
    return catalog.load("flat_plane")


@pytest.fixture(scope="session")
def zero_mean_band():
    return catalog.load("zero_mean_band")
