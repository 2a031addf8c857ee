import pytest
from hypothesis import settings

from curvelab.curves import random_filling_pair
from curvelab.surface import make_surface, standard_triangulation

# exact curve computations vary a lot in cost; deadlines only add flakiness
settings.register_profile("curvelab", deadline=None)
settings.load_profile("curvelab")


@pytest.fixture(scope="session")
def s11():
    return standard_triangulation(make_surface(1, 1))


@pytest.fixture(scope="session")
def s04():
    return standard_triangulation(make_surface(0, 4))


@pytest.fixture(scope="session")
def s05():
    return standard_triangulation(make_surface(0, 5))


@pytest.fixture(scope="session")
def s12():
    return standard_triangulation(make_surface(1, 2))


@pytest.fixture(scope="session")
def filling_05():
    return [random_filling_pair(make_surface(0, 5), seed, 3) for seed in range(6)]


@pytest.fixture(scope="session")
def filling_12():
    return [random_filling_pair(make_surface(1, 2), seed, 3) for seed in range(4)]
