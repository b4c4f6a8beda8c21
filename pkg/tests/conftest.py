import pytest

from lwlab.bodies import cross_polytope, cube, default_point_count, gen_random_body, simplex


@pytest.fixture
def square():
    return cube(2)


@pytest.fixture
def cube3():
    return cube(3)


@pytest.fixture
def octahedron():
    return cross_polytope(3)


@pytest.fixture
def triangle():
    return simplex(2)


@pytest.fixture
def random_body():
    """Factory for normalized random bodies with the harness point counts."""

    def make(n, seed=0, symmetric=False):
        m = default_point_count(n) // 2 if symmetric else default_point_count(n)
        return gen_random_body(n, m, symmetric, seed)

    return make
