from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graev.spaces import ULTRAMETRIC, FiniteSpace, add_formal_inverses

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

LEVELS = [Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]


@st.composite
def ultrametric_spaces(draw, min_points=2, max_points=5):
    """Random finite ultrametric spaces with basepoint ``e``.

    Each point gets a random address in a small tree; the distance is the
    level of the first differing coordinate, which always gives an ultrametric.
    """
    n = draw(st.integers(min_points, max_points))
    depth = draw(st.integers(1, 3))
    addresses = draw(st.lists(st.tuples(*[st.integers(0, 2)] * depth), min_size=n, max_size=n, unique=True))
    names = ["e"] + [f"p{i}" for i in range(1, n)]

    def d(a, b):
        for k, (x, y) in enumerate(zip(a, b)):
            if x != y:
                return LEVELS[k]
        return Fraction(0)

    table = [[d(a, b) for b in addresses] for a in addresses]
    return FiniteSpace.from_table(names, table, ULTRAMETRIC, "e")


@st.composite
def symmetric_spaces(draw, **kw):
    return add_formal_inverses(draw(ultrametric_spaces(**kw)))


def words(space, max_len=6, min_len=0):
    return st.lists(st.integers(0, len(space) - 1), min_size=min_len, max_size=max_len).map(tuple)
