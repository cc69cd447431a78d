import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from polydefect import polytope  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
TRIANGLE_FILES = [os.path.join(FIXTURES, f"triangle_{ax}.json") for ax in "xyz"]


def load_fixture(path):
    import json

    with open(path) as fh:
        return polytope.from_json(json.load(fh))


@pytest.fixture(scope="session")
def triangles():
    return [load_fixture(p) for p in TRIANGLE_FILES]


@pytest.fixture(scope="session")
def cayley_six(triangles):
    """Cayley polytope of three triangles in R^4: dim 6 inside R^7."""
    return polytope.cayley(triangles)


@pytest.fixture(scope="session")
def four_simplex():
    e = lambda *c: tuple(c)  # noqa: E731
    return polytope.from_vertices(4, [e(0, 0, 0, 1), e(1, 0, 0, 1), e(0, 1, 0, 1),
                                      e(1, 1, 2, 1), e(-1, -1, -1, -2)])


@pytest.fixture(scope="session")
def pyramid_chain():
    """(Q, Q', Q' x [0,2]) with Q = 2S_2 and Q' its threefold lattice pyramid."""
    Q = polytope.dilate(polytope.simplex(2), 2)
    Qp = polytope.pyramid(polytope.pyramid(polytope.pyramid(Q)))
    return Q, Qp, polytope.product(Qp, polytope.cube(1, 2))
