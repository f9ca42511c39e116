import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from welded_milnor.gauss import parse_based, random_diagram  # noqa: E402

# Three-component diagram used throughout: the first component passes over
# the third, the second runs under the first and the third.
EXAMPLE = "O2+ U1+ ; O1+ O4- U2+ O5+ U3+ O3+ ; U4- U5+"
EXAMPLE_P_PRIME = (0, 3, 0)
HOPF = "O1+ U2+ ; U1+ O2+"
# found by searching small random codes with the free-group oracle
SV_CONTROL = "O1- U2- U1- ; O2-"


@pytest.fixture
def example():
    return parse_based(EXAMPLE)


@pytest.fixture
def hopf():
    return parse_based(HOPF)


def random_based(rng, n_max=3, crossings_max=6, n_min=1):
    n = rng.randint(n_min, n_max)
    d = random_diagram(n, rng.randint(0, crossings_max), rng)
    p = tuple(rng.randrange(len(c)) if c else 0 for c in d.components)
    return d, p


@pytest.fixture
def rng():
    return random.Random(20261014)
