from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graev.groups import alternating_subgroup, symmetric_group
from graev.instances import four_point_space, s3_chain_metric, s4_chain_metric
from graev.metrics import (InvariantUltrametric, NormalChain, canonical_scale, discrete_metric,
                           is_conjugation_invariant, metric_from_chain, prop_product_inequality,
                           validate_biinvariance)
from graev.rationals import format_rational, parse_rational
from graev.report import ValidationError
from graev.spaces import METRIC, ULTRAMETRIC, FiniteSpace, add_formal_inverses, amalgam, validate_space

from conftest import ultrametric_spaces


def test_rationals_are_exact_strings():
    assert parse_rational("3/6") == Q(1, 2)
    assert parse_rational(2) == 2
    assert format_rational(Q(2, 4)) == "1/2"
    assert format_rational(Q(3)) == "3"
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(TypeError):
        parse_rational(0.5)
    with pytest.raises(TypeError):
        parse_rational(True)


@given(st.fractions(min_value=-100, max_value=100))
def test_rational_round_trip(v):
    assert parse_rational(format_rational(v)) == v


def test_four_point_space_is_ultrametric():
    assert validate_space(four_point_space()).ok


def test_validator_names_each_broken_axiom():
    bad = FiniteSpace.from_table(["e", "a", "b"], [[0, 1, "1/4"], [1, 0, "1/4"], ["1/4", "1/4", 0]],
                                 ULTRAMETRIC, "e")
    rules = {v.rule for v in validate_space(bad)}
    assert "ultrametric-inequality" in rules
    # 1 > 1/4 + 1/4, so it is not a metric either
    assert not validate_space(FiniteSpace(bad.points, bad.dist, METRIC)).ok
    asym = FiniteSpace.from_table(["e", "a"], [[0, 1], [2, 0]], ULTRAMETRIC, "e")
    assert "symmetry" in {v.rule for v in validate_space(asym)}
    zero = FiniteSpace.from_table(["e", "a"], [[0, 0], [0, 0]], ULTRAMETRIC, "e")
    assert not validate_space(zero).ok


def test_metric_triangle_violation_found():
    s = FiniteSpace.from_table(["e", "a", "b"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]], METRIC, "e")
    assert any(v.rule.startswith("triangle") for v in validate_space(s))


@given(ultrametric_spaces())
def test_random_tree_spaces_validate(space):
    assert validate_space(space).ok


@given(ultrametric_spaces(), ultrametric_spaces())
def test_amalgam_over_basepoint_is_ultrametric_and_extends(x, y):
    glued, pos = amalgam(x, y, [(x.e, y.e)])
    assert validate_space(glued).ok
    for p in range(len(x)):
        for q in range(len(x)):
            assert glued.d(p, q) == x.d(p, q)
    for p in range(len(y)):
        for q in range(len(y)):
            assert glued.d(pos[p], pos[q]) == y.d(p, q)
    # across the gluing, the distance goes through e
    for p in range(1, len(x)):
        for q in range(1, len(y)):
            assert glued.d(p, pos[q]) == max(x.d(p, x.e), y.d(q, y.e))


def test_amalgam_rejects_disagreeing_common_part():
    x = FiniteSpace.from_table(["e", "a"], [[0, 1], [1, 0]], ULTRAMETRIC, "e")
    y = FiniteSpace.from_table(["e", "a"], [[0, 2], [2, 0]], ULTRAMETRIC, "e")
    with pytest.raises(ValidationError):
        amalgam(x, y, [(0, 0), (1, 1)])


@given(ultrametric_spaces())
def test_formal_inverses_form_an_isometric_involution_fixing_e(space):
    s = add_formal_inverses(space)
    assert len(s) == 2 * len(space) - 1
    assert s.inverse(s.e) == s.e
    for p in range(len(s)):
        assert s.inverse(s.inverse(p)) == p
        assert s.d(s.inverse(p), s.e) == s.d(p, s.e)
    assert validate_space(s).ok


def test_chain_metric_values():
    m = s3_chain_metric()
    g = m.group
    assert m.norm(g.index("(12)")) == 1
    assert m.norm(g.index("(123)")) == Q(1, 2)
    assert m.norm(g.identity) == 0
    assert m.diameter(alternating_subgroup(g)) == Q(1, 2)
    assert m.diameter() == 1


@pytest.mark.parametrize("metric", [s3_chain_metric, s4_chain_metric, lambda: discrete_metric(symmetric_group(4))])
def test_normal_chains_give_biinvariant_ultrametrics(metric):
    m = metric()
    assert validate_biinvariance(m).ok
    assert is_conjugation_invariant(m)
    assert prop_product_inequality(m) == []


def test_non_normal_chain_breaks_right_invariance():
    g = symmetric_group(3)
    sub = g.generated([g.index("(12)")])
    m = metric_from_chain(g, NormalChain([tuple(range(6)), sub, (g.identity,)], [1, Q(1, 2)]), check_normal=False)
    rep = validate_biinvariance(m)
    assert not rep.ok
    assert prop_product_inequality(m) != []
    with pytest.raises(ValidationError):
        metric_from_chain(g, NormalChain([tuple(range(6)), sub, (g.identity,)], [1, Q(1, 2)]))


def test_chain_rejects_non_decreasing_values():
    g = symmetric_group(3)
    with pytest.raises(ValidationError):
        metric_from_chain(g, NormalChain([tuple(range(6)), alternating_subgroup(g), (g.identity,)], [1, 2]))


def test_from_norm_and_table_agree():
    m = s3_chain_metric()
    again = InvariantUltrametric.from_table(m.group, m.table())
    assert again.table() == m.table()
    assert InvariantUltrametric.from_norm(m.group, [m.norm(x) for x in range(6)]).table() == m.table()


def test_canonical_scale_is_identity_for_biinvariant_metric():
    # conjugation preserves norms, so Gamma(x, r) = r
    assert canonical_scale(s3_chain_metric()).is_identity


def test_canonical_scale_of_left_invariant_metric_grows():
    g = symmetric_group(3)
    sub = g.generated([g.index("(12)")])
    m = metric_from_chain(g, NormalChain([tuple(range(6)), sub, (g.identity,)], [1, Q(1, 2)]), check_normal=False)
    sc = canonical_scale(m)
    # conjugating (12) by (123) leaves the subgroup, so the ball of radius 1/2 spreads to 1
    assert sc(g.index("(123)"), Q(1, 2)) == 1
    assert sc(g.identity, Q(1, 2)) == Q(1, 2)
