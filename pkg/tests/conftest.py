import random

import pytest

from tensorcert import MPoly, TensorSpace, monomial_basis


@pytest.fixture
def ternary_quadric_space():
    return TensorSpace((3,), (2,))


def random_form(space, degree, rng, bound=30):
    """Dense random form of the given multidegree with integer coefficients."""
    if isinstance(degree, int):
        degree = (degree,)
    basis = monomial_basis(space, degree)
    terms = {}
    while not terms:
        terms = {m: rng.randint(-bound, bound) for m in basis}
        terms = {m: c for m, c in terms.items() if c}
    return MPoly(space, terms)


def seeded(seed):
    return random.Random(seed)
