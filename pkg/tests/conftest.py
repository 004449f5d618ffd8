from fractions import Fraction

import pytest

from relproj.calg import algebra_from_structure, dual_numbers, ground_algebra, octonions, product_of_fields
from relproj.cochain_core import super_cochain
from relproj.graded_linear import GradedSpace


@pytest.fixture(scope="session")
def O():
    return octonions()


@pytest.fixture(scope="session")
def Q():
    return ground_algebra()


@pytest.fixture(scope="session")
def Q2():
    return product_of_fields(2)


@pytest.fixture(scope="session")
def Q3():
    return product_of_fields(3)


@pytest.fixture(scope="session")
def D():
    return dual_numbers()


@pytest.fixture(scope="session")
def super_F():
    return super_cochain()


@pytest.fixture(scope="session")
def exterior(super_F):
    """Q[xi] with xi odd and xi^2 = 0."""
    one, zero = Fraction(1), Fraction(0)
    carrier = GradedSpace(super_F.group, (1, 1))
    products = {(0, 0): (one, zero), (0, 1): (zero, one), (1, 0): (zero, one)}
    return algebra_from_structure(super_F, carrier, products, (one, zero), name="exterior")


@pytest.fixture
def make_event():
    """Handler events the way the CLI builds them."""

    def event(document=None, **kwargs) -> dict:
        return {"document": document, "seed": 0, "samples": None, "format": "json", "params": {}, **kwargs}

    return event
