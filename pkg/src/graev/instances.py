"""Concrete small instances used by the tests, the demos and ``graev selftest``."""

from __future__ import annotations

from fractions import Fraction as Q
from functools import lru_cache

from .amalgam import AmalgamSetup, build_multi_setup, subgroup_as_group, trivial_group
from .groups import FiniteGroup, alternating_subgroup, parse_cycles, symmetric_group
from .metrics import InvariantUltrametric, NormalChain, discrete_metric, metric_from_chain
from .spaces import ULTRAMETRIC, FiniteSpace, add_formal_inverses


@lru_cache(maxsize=None)
def s3() -> FiniteGroup:
    return symmetric_group(3)


@lru_cache(maxsize=None)
def s3_chain_metric() -> InvariantUltrametric:
    """``S3 > A3 > {e}`` with values ``1 > 1/2``."""
    g = s3()
    return metric_from_chain(g, NormalChain([tuple(range(6)), alternating_subgroup(g), (g.identity,)],
                                            [1, Q(1, 2)]))


@lru_cache(maxsize=None)
def s3_amalgam() -> AmalgamSetup:
    """``S3 *_{A3} S3`` with the chain metric on both sides."""
    m = s3_chain_metric()
    a, incl = subgroup_as_group(m.group, alternating_subgroup(m.group))
    return build_multi_setup([m, m], a, [incl, incl], ["G", "H"])


@lru_cache(maxsize=None)
def s3_free_product(factors: int = 2) -> AmalgamSetup:
    """``S3 * ... * S3`` over the trivial group."""
    m = s3_chain_metric()
    names = ["G", "H", "K", "L"][:factors]
    return build_multi_setup([m] * factors, trivial_group(), [[m.group.identity]] * factors, names)


@lru_cache(maxsize=None)
def s4_chain_metric() -> InvariantUltrametric:
    """``S4 > A4 > V4 > {e}`` with values ``1 > 1/2 > 1/4``."""
    g = symmetric_group(4)
    v4 = tuple(sorted(g.index(c) for c in ["e", "(12)(34)", "(13)(24)", "(14)(23)"]))
    return metric_from_chain(g, NormalChain([tuple(range(24)), alternating_subgroup(g), v4, (g.identity,)],
                                            [1, Q(1, 2), Q(1, 4)]))


@lru_cache(maxsize=None)
def s4_amalgam() -> AmalgamSetup:
    """``S4 *_{V4} S4``: letters outside ``V4`` sit at distance ``1/2`` or ``1`` from it."""
    m = s4_chain_metric()
    g = m.group
    v4 = [g.index(c) for c in ["e", "(12)(34)", "(13)(24)", "(14)(23)"]]
    a, incl = subgroup_as_group(g, v4)
    return build_multi_setup([m, m], a, [incl, incl], ["G", "H"])


@lru_cache(maxsize=None)
def s3_z6_amalgam() -> AmalgamSetup:
    """Unequal factors: ``S3`` and ``Z6`` over a common ``Z3``, both with values ``1 > 1/2``."""
    m = s3_chain_metric()
    g = m.group
    z6 = FiniteGroup.from_permutations([(1, 2, 3, 4, 5, 0)], 6)
    r = z6.index("(135)(246)")
    z3 = z6.generated([r])
    z6m = metric_from_chain(z6, NormalChain([tuple(range(6)), z3, (z6.identity,)], [1, Q(1, 2)]))
    c = g.index("(123)")
    a, incl_g = subgroup_as_group(g, alternating_subgroup(g))
    # match the abstract A3 = <(123)> with <r> in Z6 generator to generator
    images = {g.identity: z6.identity, c: r, g.mul(c, c): z6.mul(r, r)}
    incl_h = [images[x] for x in incl_g]
    return build_multi_setup([m, z6m], a, [incl_g, incl_h], ["G", "H"])


# -- the S6 word with two maximal forests --------------------------------------

S6_LETTERS = {
    "g1": "(12)", "g2": "(34)", "g3": "(12)(34)", "f1": "(12)(34)(56)", "f2": "(56)",
}
S6_WORD = ["f1", "g1", "g2", "g2", "g1", "g3", "f2"]


@lru_cache(maxsize=None)
def s6_setup() -> AmalgamSetup:
    g = symmetric_group(6)
    m = discrete_metric(g)
    return build_multi_setup([m, m], trivial_group(), [[g.identity], [g.identity]], ["G", "H"])


def s6_word() -> list:
    setup = s6_setup()
    g = setup.factors[0].group
    return [setup.letter(0, g.element(S6_LETTERS[name])) for name in S6_WORD]


# -- the 20-letter word with seven cancelling blocks ---------------------------
#
# Both factors are S4 over A = <(123)>; the letters below were found by a
# seeded random search so that the seven block identities hold and no
# other subinterval evaluates into A except those forced by them.

EXAMPLE_POSITIONS = ["g1", "b", "g2", "h1", "h2", "g3", "g4", "h3", "g5", "g6", "g7", "h4",
                     "g8", "g9", "h5", "h6", "g10", "h7", "h8", "g11"]

EXAMPLE_BLOCKS = {
    "a1": (6, 7), "a2": (9, 11), "a3": (15, 16), "a4": (18, 19),
    "a5": (4, 12), "a6": (14, 20), "a7": (1, 13),
}

EXAMPLE_LETTERS = {
    "g1": "(1324)", "b": "(132)", "g2": "(1324)", "h1": "(1234)", "h2": "(1342)",
    "g3": "(13)", "g4": "(12)", "h3": "(12)", "g5": "(14)", "g6": "(143)", "g7": "(13)",
    "h4": "(1432)", "g8": "(12)(34)", "g9": "(1324)", "h5": "(1423)", "h6": "(24)",
    "g10": "(1432)", "h7": "(1243)", "h8": "(34)", "g11": "(243)",
}


def example_group() -> FiniteGroup:
    return symmetric_group(4)


@lru_cache(maxsize=None)
def example_setup() -> AmalgamSetup:
    g = example_group()
    m = discrete_metric(g)
    a, incl = subgroup_as_group(g, g.generated([g.index("(123)")]))
    return build_multi_setup([m, m], a, [incl, incl], ["G", "H"])


def example_word(letters: dict | None = None) -> list:
    setup = example_setup()
    g = setup.factors[0].group
    letters = letters or EXAMPLE_LETTERS
    out = []
    for name in EXAMPLE_POSITIONS:
        side = 1 if name.startswith("h") else 0
        out.append(setup.letter(side, g.element(letters[name])))
    return out


EXAMPLE_F1 = [(1, 13), (4, 12), (6, 7), (9, 11), (14, 20), (15, 16), (18, 19)]
EXAMPLE_F2 = [(1, 20), (4, 12), (6, 7), (9, 11), (15, 16), (18, 19)]
EXAMPLE_F3 = EXAMPLE_F1 + [(2, 2)]


# -- small spaces ---------------------------------------------------------------

def four_point_space() -> FiniteSpace:
    """``e, x, y, z`` with ``d(x,e) = d(y,e) = 1``, ``d(z,e) = 1/2``, ``d(x,y) = 1/2``."""
    h = Q(1, 2)
    pts = ("e", "x", "y", "z")
    table = [[0, 1, 1, h], [1, 0, h, 1], [1, h, 0, 1], [h, 1, 1, 0]]
    return FiniteSpace.from_table(pts, table, ULTRAMETRIC, "e")


def three_point_space() -> FiniteSpace:
    """``e, x, y`` with ``d(x,e) = 1``, ``d(y,e) = 1/2``, ``d(x,y) = 1``."""
    h = Q(1, 2)
    return FiniteSpace.from_table(("e", "x", "y"), [[0, 1, h], [1, 0, 1], [h, 1, 0]], ULTRAMETRIC, "e")


def two_point_space(name: str, value) -> FiniteSpace:
    return FiniteSpace.from_table(("e", name), [[0, value], [value, 0]], ULTRAMETRIC, "e")


def symmetric(space: FiniteSpace) -> FiniteSpace:
    return add_formal_inverses(space)


def lipschitz_instance():
    """The symmetric 3-point space and images ``x -> (12)``, ``y -> (123)`` in ``S3``."""
    return symmetric(three_point_space()), s3_chain_metric(), {"x": "(12)", "y": "(123)"}


def s6_cycles(name: str) -> tuple:
    return parse_cycles(S6_LETTERS[name], 6)
