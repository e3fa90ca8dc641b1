import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from graev.forest import EvaluationForest, build_maximal_forest
from graev.fpairs import (FPair, admissibility, can_shorten, check_pair, is_multipliable_pair, is_reduced_pair,
                          is_simple, make_multipliable, make_pair, make_simple, rho, shorten, symmetrize,
                          symmetrized_letter, to_reduced_pair, transfer, transfer_order)
from graev.instances import s3_amalgam, s3_free_product, s3_z6_amalgam
from graev.product import product_norm
from graev.report import ValidationError

SETUPS = [s3_amalgam, s3_free_product, s3_z6_amalgam]


@st.composite
def pairs(draw, setup, max_len=4):
    """A trivial zeta (a word followed by its inverse's normal form) and an arbitrary alpha."""
    letters = setup.letters()
    w = draw(st.lists(st.sampled_from(letters), min_size=1, max_size=max_len))
    zeta = list(w) + setup.as_word(setup.inverse(setup.evaluate(w)))
    zeta = [z for z in zeta if z != setup.one_letter()] or [setup.one_letter()]
    alpha = draw(st.lists(st.sampled_from(letters), min_size=len(zeta), max_size=len(zeta)))
    return make_pair(setup, alpha, zeta)


def test_make_pair_requires_trivial_zeta():
    s = s3_amalgam()
    g = s.factors[0].group
    x = s.letter(0, g.index("(12)"))
    with pytest.raises(ValidationError):
        make_pair(s, [x], [x])
    with pytest.raises(ValueError):
        make_pair(s, [x, x], [x])
    p = make_pair(s, [x], [s.one_letter()])
    assert check_pair(s, p) == [] and rho(s, p) == 1


@pytest.mark.parametrize("make", SETUPS)
@given(data=st.data())
def test_make_multipliable(make, data):
    s = make()
    p = data.draw(pairs(s))
    q = make_multipliable(s, p)
    assert check_pair(s, q) == []
    assert q.target == p.target
    assert is_multipliable_pair(s, q)
    assert rho(s, q) <= rho(s, p)


@pytest.mark.parametrize("make", SETUPS)
@given(data=st.data())
def test_make_simple_keeps_rho_and_simplifies(make, data):
    s = make()
    q = make_multipliable(s, data.draw(pairs(s)))
    forest = build_maximal_forest(s, q.zeta)
    r = make_simple(s, q, forest)
    assert check_pair(s, r) == []
    assert rho(s, r) == rho(s, q)
    assert is_simple(s, r, forest)
    assert is_multipliable_pair(s, r)


def test_transfer_order_is_by_right_endpoint_and_skips_last_root():
    f = EvaluationForest.from_intervals([(1, 4), (2, 3), (5, 5), (6, 9), (7, 8)])
    order = transfer_order(f)
    ends = [f.intervals[t][1] for t in order]
    assert ends == sorted(ends)
    assert (6, 9) not in [f.intervals[t] for t in order]


def test_transfer_preserves_values_and_rho():
    s = s3_amalgam()
    g = s.factors[0].group
    x, y = s.letter(0, g.index("(12)")), s.letter(1, g.index("(13)"))
    p = make_pair(s, [x, y], [x, s.letter_inv(x)])
    a = s.a_group.element(1)
    q = transfer(s, p, 0, a)
    assert check_pair(s, q) == [] and rho(s, q) == rho(s, p)
    with pytest.raises(IndexError):
        transfer(s, p, 1, a)


def test_symmetrize_on_a_single_node():
    s = s3_free_product()
    g = s.factors[0].group
    a, b, c = (s.letter(0, g.index(t)) for t in ("(12)", "(13)", "(23)"))
    z3 = s.letter_inv(s.letter_mul(a, b))
    # one node [1,3]; every zeta letter lies outside A = {e}
    p = make_pair(s, [a, b, c], [a, b, z3])
    forest = EvaluationForest.from_intervals([(1, 3)])
    assert admissibility(s, p, forest, 0, [1, 2, 3]) == []
    q = symmetrize(s, p, forest, 0, [1, 2, 3], 3)
    assert check_pair(s, q) == []
    assert q.zeta[:2] == (a, b) and q.zeta[2] == s.letter_inv(s.letter_mul(a, b))
    assert rho(s, q) <= rho(s, p)
    # two listed positions: the pivot gets the inverse of the other alpha letter
    p2 = make_pair(s, [a, c], [b, s.letter_inv(b)])
    f2 = EvaluationForest.from_intervals([(1, 2)])
    q2 = symmetrize(s, p2, f2, 0, [1, 2], 2)
    assert q2.zeta == (a, s.letter_inv(a))
    assert rho(s, q2) <= rho(s, p2)
    assert admissibility(s, p, forest, 0, [1, 4]) == ["positions-in-remainder"]
    with pytest.raises(ValidationError):
        symmetrize(s, p, forest, 0, [4], 1)
    one = s.one_letter()
    trivial = make_pair(s, [a, b, c], [one, one, one])
    assert "listed-letters-outside-A" in admissibility(s, trivial, forest, 0, [1, 2])


@pytest.mark.parametrize("make", SETUPS)
@given(data=st.data())
def test_every_admissible_symmetrization_keeps_rho_down(make, data):
    s = make()
    q = make_multipliable(s, data.draw(pairs(s, 3)))
    forest = build_maximal_forest(s, q.zeta)
    q = make_simple(s, q, forest)
    for t in range(len(forest)):
        rem = forest.remainder(t)
        ks = [k for k in rem if s.letter_in_a(q.zeta[k - 1]) is None]
        if not ks or admissibility(s, q, forest, t, ks):
            continue
        for k0 in range(1, len(ks) + 1):
            r = symmetrize(s, q, forest, t, ks, k0)
            assert check_pair(s, r) == []
            assert rho(s, r) <= rho(s, q)


def test_single_letter_symmetrization_gives_identity():
    s = s3_free_product()
    g = s.factors[0].group
    a = s.letter(0, g.index("(12)"))
    assert symmetrized_letter(s, [a], 1) == s.one_letter()


def test_shorten():
    s = s3_free_product()
    g = s.factors[0].group
    a, b = s.letter(0, g.index("(12)")), s.letter(0, g.index("(13)"))
    p = make_pair(s, [a, b], [a, s.letter_inv(a)])
    assert can_shorten(s, p, 0)
    q = shorten(s, p, 0)
    assert len(q) == 1 and q.target == p.target and rho(s, q) <= rho(s, p)
    h = s.letter(1, g.index("(12)"))
    p2 = make_pair(s, [a, h], [s.one_letter(), s.one_letter()])
    assert not can_shorten(s, p2, 0)
    with pytest.raises(ValidationError):
        shorten(s, p2, 0)


@pytest.mark.parametrize("make", SETUPS)
@given(data=st.data())
def test_reduction_pipeline(make, data):
    s = make()
    p = data.draw(pairs(s))
    trace = []
    q = to_reduced_pair(s, p, trace)
    assert check_pair(s, q) == []
    assert is_reduced_pair(s, q)
    assert q.target == p.target
    values = [step.rho for step in trace]
    assert values == sorted(values, reverse=True)
    assert values[0] == rho(s, p) and rho(s, q) <= rho(s, p)
    assert rho(s, q) >= product_norm(s, p.target).value
    for step in trace:
        assert check_pair(s, step.pair) == []


def test_reduced_pair_flags():
    s = s3_amalgam()
    g = s.factors[0].group
    x = s.letter(0, g.index("(12)"))
    p = FPair((x,), (s.one_letter(),), s.evaluate([x]))
    assert is_reduced_pair(s, p)
