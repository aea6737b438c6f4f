from fractions import Fraction

import pytest
from hypothesis import settings
from sympy import QQ
from sympy.polys.rings import ring as poly_ring

from zstab.ring import IntersectionRing

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def cp2():
    return IntersectionRing(2, [("h", 2)], {"h^2": 1})


@pytest.fixture
def sym():
    """Polynomial ring QQ[sigma, b] for symbolic coefficients."""
    R, sigma, b = poly_ring("sigma,b", QQ)
    return R, sigma, b


def F(x):
    return Fraction(x)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
