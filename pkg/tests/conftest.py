import pytest
from hypothesis import settings

from perfcone import data
from perfcone.classify import builtin_domain
from perfcone.forms import SymForm
from perfcone.minvec import shortest_vectors

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def min_config(name):
    return shortest_vectors(SymForm.of(data.GRAMS[name])).pairs


@pytest.fixture(scope="session")
def d4_config():
    return min_config("D4")


@pytest.fixture(scope="session")
def a2_config():
    return min_config("A2")


@pytest.fixture(scope="session")
def a3_config():
    return min_config("A3")


@pytest.fixture(scope="session")
def a4_config():
    return min_config("A4")


@pytest.fixture(scope="session")
def e7_config():
    return min_config("E7*")


@pytest.fixture(scope="session")
def d4_cone():
    return builtin_domain("D4")
