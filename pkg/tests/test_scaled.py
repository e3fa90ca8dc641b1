from fractions import Fraction as Q
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graev.free import enumerate_matches, graev_norm_free, match_cost, parse_word, reduce_word
from graev.instances import lipschitz_instance, s3_chain_metric, three_point_space, two_point_space
from graev.metrics import canonical_scale
from graev.morphisms import (Morphism, check_morphism, extend_morphism, lipschitz_violations,
                             morphism_from_names)
from graev.report import BoundError, ValidationError
from graev.scaled import (ScaledSpace, graev_norm_scaled, plain, retract, scaled_match_norm, scaled_word_norm,
                          union_scaled, words_evaluating_to)
from graev.scales import identity_scale, linear_scale, step_scale, validate_scale
from graev.spaces import METRIC, FiniteSpace, add_formal_inverses

from conftest import symmetric_spaces, words

SPACE = add_formal_inverses(three_point_space())
STRETCH = ScaledSpace(SPACE, linear_scale([2 if p.startswith("x") else 1 for p in SPACE.points]))


def test_identity_and_linear_scales_validate():
    assert validate_scale(identity_scale(3), 0).ok
    assert validate_scale(linear_scale([1, 2, "3/2"]), 0).ok
    assert STRETCH.validate().ok


def test_bad_scales_are_reported():
    assert "dominates-identity" in {v.rule for v in validate_scale(linear_scale([1, "1/2"]), 0)}
    assert "identity-at-basepoint" in {v.rule for v in validate_scale(linear_scale([2, 1]), 0)}
    step = step_scale([0, "1/2"], [[0, 0], [0, "1/4"]])
    assert validate_scale(step, 0).ok
    assert "vanishes-at-zero" in {v.rule for v in validate_scale(step_scale([0], [[0], [1]]), 0)}
    drop = step_scale([0, "1/2", 1], [[0, 0, 0], [0, 3, 2]])
    assert "monotone" in {v.rule for v in validate_scale(drop, 0)}


def test_step_scale_values():
    s = step_scale([0, "1/2", 1], [[0, 0, 0], [0, 1, 2]])
    assert s(1, Q(1, 4)) == Q(1, 4)
    assert s(1, Q(1, 2)) == 1          # right-continuous: the step starts at its threshold
    assert s(1, Q(3, 4)) == 1
    assert s(1, Q(5)) == 5
    assert not s.is_identity


@given(symmetric_spaces(max_points=3), st.data())
def test_identity_scale_recursion_is_the_match_cost(space, data):
    w = data.draw(words(space, 6, min_len=1))
    theta = data.draw(st.sampled_from(list(enumerate_matches(len(w)))))
    assert scaled_match_norm(w, theta, plain(space)) == match_cost(w, theta, space)
    metric = FiniteSpace(space.points, space.dist, METRIC, space.basepoint, space.inv)
    assert scaled_match_norm(w, theta, plain(metric)) == match_cost(w, theta, metric)


@given(st.data())
def test_scaled_word_dp_equals_all_matches(data):
    w = data.draw(words(SPACE, 6, min_len=1))
    value, theta = scaled_word_norm(w, STRETCH)
    assert value == min(scaled_match_norm(w, th, STRETCH) for th in enumerate_matches(len(w)))
    assert scaled_match_norm(w, theta, STRETCH) == value


def test_identity_scale_matches_free_norm_exhaustively():
    for n in range(1, 5):
        for w in product(range(len(SPACE)), repeat=n):
            assert graev_norm_scaled(w, plain(SPACE)).value == graev_norm_free(w, SPACE)


def test_bounded_scaled_norm_against_brute_force():
    brute = {}
    for n in range(1, 5):
        for w in product(range(len(SPACE)), repeat=n):
            v = min(scaled_match_norm(w, th, STRETCH) for th in enumerate_matches(n))
            f = reduce_word(w, SPACE)
            brute[f] = min(v, brute.get(f, v))
    for f, v in brute.items():
        if f and len(f) <= 2:
            res = graev_norm_scaled(f, STRETCH, length_bound=4)
            assert res.value == v
            assert reduce_word(res.word, SPACE) == f
            assert scaled_match_norm(res.word, res.match, STRETCH) == v


def test_longer_words_can_lower_a_scaled_norm_never_raise():
    f = parse_word(["x", "y"], SPACE)
    values = [graev_norm_scaled(f, STRETCH, length_bound=b).value for b in (2, 3, 4)]
    assert values == sorted(values, reverse=True)


def test_bound_below_reduced_length_is_an_error():
    with pytest.raises(BoundError):
        graev_norm_scaled(parse_word(["x", "y"], SPACE), STRETCH, length_bound=1)


def test_word_enumeration_matches_brute_force():
    f = parse_word(["x"], SPACE)
    ws = list(words_evaluating_to(f, SPACE, 3))
    assert ws and all(reduce_word(w, SPACE) == f and len(w) == 3 for w in ws)
    brute = [w for w in product(range(len(SPACE)), repeat=3) if reduce_word(w, SPACE) == f]
    assert sorted(ws) == sorted(brute)


def test_union_keeps_both_sides_and_retract_is_nonexpanding():
    x = plain(add_formal_inverses(two_point_space("a", 1)))
    y = plain(add_formal_inverses(two_point_space("b", Q(1, 2))))
    union, pos = union_scaled(x, y)
    assert union.validate().ok
    assert len(union.space) == 5
    us = union.space
    for p in range(len(x.space)):
        for q in range(len(x.space)):
            assert us.d(p, q) == x.space.d(p, q)
    for w in product(range(len(us)), repeat=4):
        r = retract(w, union, len(x.space))
        assert all(z < len(x.space) for z in r)
        assert graev_norm_free(r, x.space) <= graev_norm_free(w, us)
    for w in product(range(len(x.space)), repeat=4):
        assert graev_norm_free(w, us) == graev_norm_free(w, x.space)


def test_union_of_scaled_spaces_keeps_the_scales():
    x = ScaledSpace(add_formal_inverses(two_point_space("a", 1)), linear_scale([1, 2, 2]))
    y = plain(add_formal_inverses(two_point_space("b", 1)))
    union, pos = union_scaled(x, y)
    assert union.gamma(1, Q(1)) == 2
    assert union.gamma(pos[1], Q(1)) == 1


def test_lipschitz_morphism_extension():
    space, metric, mapping = lipschitz_instance()
    phi = morphism_from_names(plain(space), metric, mapping)
    assert check_morphism(phi).ok
    g = metric.group
    w = parse_word(["x", "y", "x^-1"], space)
    assert extend_morphism(phi, w) == g.product([g.index("(12)"), g.index("(123)"), g.index("(12)")])
    ws = [w for n in range(1, 4) for w in product(range(len(space)), repeat=n)]
    assert lipschitz_violations(phi, ws, lambda w: graev_norm_free(w, space)) == []


def test_morphism_checker_reports_distance_and_scale_breaks():
    space, metric, _ = lipschitz_instance()
    # y has d(y, e) = 1/2 but (12) has norm 1
    phi = morphism_from_names(plain(space), metric, {"x": "(12)", "y": "(12)"})
    rep = check_morphism(phi)
    assert "distance" in {v.rule for v in rep}
    with pytest.raises(ValidationError):
        extend_morphism(phi, (1,))
    g = metric.group
    broken = Morphism(plain(space), metric, tuple([g.identity] * len(space)))
    assert check_morphism(broken).ok
    bad_inv = Morphism(plain(space), metric,
                       tuple(g.index("(123)") if p.startswith("y") else g.identity for p in space.points))
    assert "inverses" in {v.rule for v in check_morphism(bad_inv)}


def test_canonical_scale_drives_the_scale_check():
    space, metric, mapping = lipschitz_instance()
    phi = morphism_from_names(plain(space), metric, mapping, canonical_scale(metric))
    assert check_morphism(phi).ok
