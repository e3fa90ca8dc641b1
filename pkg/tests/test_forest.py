from itertools import combinations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from graev.forest import (EvaluationForest, build_maximal_forest, check_forest, check_maximal,
                          check_structure, enumerate_maximal_forests, is_decomposable, same_forest)
from graev.instances import (EXAMPLE_F1, EXAMPLE_F2, EXAMPLE_F3, example_setup, example_word, s3_amalgam,
                             s3_free_product, s6_setup, s6_word)
from graev.report import ValidationError


def rules(rep):
    return {v.rule for v in rep}


def trivial_word(setup, draw, max_len=5):
    """A random word followed by a normal form of its inverse, with A letters sprinkled in."""
    letters = setup.letters()
    w = draw(st.lists(st.sampled_from(letters), min_size=1, max_size=max_len))
    tail = setup.as_word(setup.inverse(setup.evaluate(w)))
    word = list(w) + [x for x in tail if x != setup.one_letter() or not tail]
    assert setup.is_trivial(word)
    return word


# -- brute-force reference for maximal forests on short words -----------------

def in_a(setup, zeta, m, M):
    return not setup.evaluate(zeta[m - 1:M]).tail


def naive_maximal_forests(setup, zeta):
    n = len(zeta)
    ivs = [(m, M) for m in range(1, n + 1) for M in range(m, n + 1) if in_a(setup, zeta, m, M)]
    found = set()
    for k in range(1, len(ivs) + 1):
        for fam in combinations(ivs, k):
            if is_maximal_forest(setup, zeta, fam):
                found.add(frozenset(fam))
    return found


def is_maximal_forest(setup, zeta, fam):
    n = len(zeta)
    inside = lambda a, b: b[0] <= a[0] and a[1] <= b[1] and a != b
    for a in fam:
        for b in fam:
            if a == b:
                continue
            disjoint = a[1] < b[0] or b[1] < a[0]
            if not (disjoint or inside(a, b) or inside(b, a)):
                return False
            if inside(a, b) and not (b[0] < a[0] and a[1] < b[1]):
                return False
    roots = [a for a in fam if not any(inside(a, b) for b in fam)]
    if sorted(i for m, M in roots for i in range(m, M + 1)) != list(range(1, n + 1)):
        return False
    for node in fam:
        kids = [a for a in fam if inside(a, node) and not any(inside(a, c) and inside(c, node) for c in fam)]
        covered = {i for m, M in kids for i in range(m, M + 1)}
        rem = [i for i in range(node[0], node[1] + 1) if i not in covered]
        if not rem:
            return False
        sides = {zeta[i - 1][0] for i in rem if setup.letter_in_a(zeta[i - 1]) is None}
        if len(sides) > 1:
            return False
        m, M = node
        if any(in_a(setup, zeta, m, k) and in_a(setup, zeta, k + 1, M) for k in range(m, M)):
            return False
        for a in range(m, M + 1):
            for b in range(a, M + 1):
                if (a, b) == node or not in_a(setup, zeta, a, b):
                    continue
                if all(kb < a or b < ka or (a <= ka and kb <= b) for ka, kb in kids):
                    if not set(range(a, b + 1)) <= covered:
                        return False
    return True


# -- the S6 word ----------------------------------------------------------------

def test_s6_word_has_two_maximal_forests():
    setup, zeta = s6_setup(), s6_word()
    forests = enumerate_maximal_forests(setup, zeta)
    assert sorted(f.describe() for f in forests) == ["[1,7] > {[2,5] > {[3,4]}}", "[1,7] > {[4,6]}"]
    built = build_maximal_forest(setup, zeta)
    assert any(same_forest(built, f) for f in forests)
    assert {frozenset(f.intervals) for f in forests} == naive_maximal_forests(setup, zeta)


def test_s6_near_misses():
    setup, zeta = s6_setup(), s6_word()
    not_in_a = EvaluationForest.from_intervals([(1, 7), (2, 3)])
    assert ("item-vi", (2, 3)) in {(v.rule, v.witness) for v in check_forest(setup, zeta, not_in_a)}
    skips = EvaluationForest.from_intervals([(1, 7), (3, 4)])
    assert check_forest(setup, zeta, skips).ok
    assert ((1, 7), (2, 5)) in [v.witness for v in check_maximal(setup, zeta, skips) if v.rule == "item-ix"]


# -- the 20-letter S4 word ------------------------------------------------------

def test_example_word_checker_vectors():
    setup, zeta = example_setup(), example_word()
    f1, f2, f3 = (EvaluationForest.from_intervals(x) for x in (EXAMPLE_F1, EXAMPLE_F2, EXAMPLE_F3))
    assert check_forest(setup, zeta, f1).ok
    assert [(v.rule, v.witness) for v in check_maximal(setup, zeta, f1)] == [("item-ix", ((1, 13), (2, 2)))]
    assert check_forest(setup, zeta, f2).ok
    m2 = check_maximal(setup, zeta, f2)
    assert ("item-viii", ((1, 13), (14, 20))) in {(v.rule, v.witness) for v in m2}
    assert check_forest(setup, zeta, f3).ok and check_maximal(setup, zeta, f3).ok


def test_example_word_block_identities():
    setup, zeta = example_setup(), example_word()
    for m, M in EXAMPLE_F3:
        assert not setup.evaluate(zeta[m - 1:M]).tail
    assert is_decomposable(setup, zeta, (1, 20)) == ((1, 13), (14, 20))


def test_example_word_has_one_maximal_forest_and_builder_finds_it():
    setup, zeta = example_setup(), example_word()
    forests = enumerate_maximal_forests(setup, zeta)
    f3 = EvaluationForest.from_intervals(EXAMPLE_F3)
    assert len(forests) == 1 and same_forest(forests[0], f3)
    assert same_forest(build_maximal_forest(setup, zeta), f3)


# -- structure ------------------------------------------------------------------

def test_structure_rules():
    assert check_structure(EvaluationForest.from_intervals([(1, 4), (2, 3)]), 4).ok
    assert "item-ii" in rules(check_structure(EvaluationForest.from_intervals([(1, 2)]), 4))
    assert "item-i" in rules(check_structure(EvaluationForest.from_intervals([(1, 5)]), 4))
    crossing = EvaluationForest.from_intervals([(1, 4), (2, 3), (3, 4)])
    assert not check_structure(crossing, 4).ok
    # sharing an endpoint with the parent breaks strictness
    assert "item-v" in rules(check_structure(EvaluationForest.from_intervals([(1, 4), (1, 2)]), 4))


def test_json_round_trip():
    f = EvaluationForest.from_intervals(EXAMPLE_F3)
    assert same_forest(EvaluationForest.from_json(f.to_json()), f)


def test_builder_rejects_words_outside_a():
    s = s3_amalgam()
    g = s.factors[0].group
    with pytest.raises(ValidationError):
        build_maximal_forest(s, [s.letter(0, g.index("(12)"))])


def test_enumeration_budget():
    with pytest.raises(OverflowError):
        enumerate_maximal_forests(s6_setup(), s6_word(), limit=3)


@pytest.mark.parametrize("make", [s3_amalgam, s3_free_product])
@given(data=st.data())
def test_builder_output_is_maximal(make, data):
    setup = make()
    zeta = trivial_word(setup, data.draw, 6)
    forest = build_maximal_forest(setup, zeta)
    assert check_forest(setup, zeta, forest).ok
    assert check_maximal(setup, zeta, forest).ok


@settings(max_examples=25)
@given(data=st.data())
def test_enumeration_matches_naive_search(data):
    setup = s3_amalgam()
    zeta = trivial_word(setup, data.draw, 3)
    assume(len(zeta) <= 5)
    found = {frozenset(f.intervals) for f in enumerate_maximal_forests(setup, zeta)}
    assert found == naive_maximal_forests(setup, zeta)
    built = build_maximal_forest(setup, zeta)
    assert frozenset(built.intervals) in found


@given(data=st.data())
def test_builder_on_words_evaluating_into_a(data):
    setup = s3_amalgam()
    zeta = trivial_word(setup, data.draw, 5)
    a = setup.a_letter(data.draw(st.integers(1, setup.a_group.order - 1)))
    k = data.draw(st.integers(0, len(zeta)))
    zeta = zeta[:k] + [a] + zeta[k:]
    assert not setup.evaluate(zeta).tail and setup.evaluate(zeta) != setup.one
    forest = build_maximal_forest(setup, zeta)
    assert check_forest(setup, zeta, forest).ok
    assert check_maximal(setup, zeta, forest).ok
