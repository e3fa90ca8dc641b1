"""The twelve acceptance checks, each an exhaustive finite computation against an independent oracle.

``run_all()`` returns one :class:`CriterionResult` per check; ``graev
selftest`` and ``tests/test_acceptance.py`` print them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import product as cartesian

import numpy as np

from . import instances as inst
from .amalgam import build_multi_setup, subgroup_as_group
from .forest import (EvaluationForest, build_maximal_forest, check_forest, check_maximal,
                     enumerate_maximal_forests, same_forest)
from .free import (apply_match, batch_levels, enumerate_matches, graev_norm_free, graev_norm_free_batch,
                   inverse_word, match_from_pairs, reduce_word, reduced_words)
from .groups import alternating_subgroup
from .hnn import (build_hnn, check_subgroup_metric_agreement, restriction_violations, stable_letter_norm)
from .morphisms import check_morphism, lipschitz_violations, morphism_from_names
from .oracles import free_norm_batch_by_matches, unrestricted_norms
from .product import product_norm, product_norm_dp
from .scaled import ScaledSpace, graev_norm_scaled, plain, retract, scaled_match_norm, union_scaled
from .scales import linear_scale
from .spaces import ULTRAMETRIC, FiniteSpace, add_formal_inverses


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _words(n_letters: int, length: int) -> np.ndarray:
    if length == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    return np.indices((n_letters,) * length, dtype=np.uint8).reshape(length, -1).T


# -- 1 ------------------------------------------------------------------------

def match_norm_oracle(max_len: int = 8):
    """Interval DP against all Motzkin matches, on every word over the symmetric 4-point space."""
    space = add_formal_inverses(inst.four_point_space())
    checked = mismatches = 0
    for n in range(1, max_len + 1):
        words = _words(len(space), n)
        dp = graev_norm_free_batch(words, space)
        brute = free_norm_batch_by_matches(words, space)
        mismatches += int((dp != brute).sum())
        checked += len(words)
    # the batch codes decode to the exact values the scalar DP returns
    sample = reduced_words(space, 5)[::97]
    decoded = batch_levels(space, graev_norm_free_batch(sample, space))
    mismatches += sum(v != graev_norm_free(tuple(w), space) for w, v in zip(sample.tolist(), decoded))
    return mismatches == 0, f"{checked} words, {mismatches} mismatches"


# -- 2 ------------------------------------------------------------------------

def _norm_table(space, words):
    """Exact norms of many words, batched by reduced length."""
    by_len: dict = {}
    for w in words:
        by_len.setdefault(len(w), set()).add(w)
    out = {(): Q(0)}
    for n, group in by_len.items():
        if n == 0:
            continue
        group = sorted(group)
        codes = graev_norm_free_batch(np.array(group, dtype=np.int64), space)
        for w, v in zip(group, batch_levels(space, codes)):
            out[w] = v
    return out


def free_ultrametric(max_len: int = 4):
    """delta on F(X) over all reduced words of length <= max_len for a 3-point space."""
    space = add_formal_inverses(inst.three_point_space())
    elems = [()] + [tuple(w) for n in range(1, max_len + 1) for w in reduced_words(space, n).tolist()]
    letters = range(len(space))

    def red(*parts):
        return reduce_word(sum(parts, ()), space)

    needed = {red(inverse_word(f, space), g) for f in elems for g in elems}
    for h in list(needed):
        for y in letters:
            needed.add(red((space.inverse(y),), h, (y,)))
    norms = _norm_table(space, needed)

    def dist(f, g):
        return norms[red(inverse_word(f, space), g)]

    levels = sorted(set(norms.values()))
    code = {v: i for i, v in enumerate(levels)}
    d = np.array([[code[dist(f, g)] for g in elems] for f in elems], dtype=np.int64)
    bad = []
    if (d != d.T).any():
        bad.append("symmetry")
    off = ~np.eye(len(elems), dtype=bool)
    if (d[off] == code.get(Q(0), -1)).any() or (np.diag(d) != 0).any():
        bad.append("zero-iff-equal")
    for j in range(len(elems)):
        if (d > np.maximum.outer(d[:, j], d[j, :])).any():
            bad.append(f"strong triangle via {elems[j]}")
            break
    # delta(x f y, x g y) = ||y^-1 f^-1 g y|| against ||f^-1 g||, over all pairs and letters
    for f in elems:
        for g in elems:
            h = red(inverse_word(f, space), g)
            for y in letters:
                if norms[red((space.inverse(y),), h, (y,))] != norms[h]:
                    bad.append(f"invariance at {f}, {g}, {y}")
                    break
    for x in letters:
        for y in letters:
            if dist((x,) if x != space.e else (), (y,) if y != space.e else ()) != space.d(x, y):
                bad.append(f"extension at {space.points[x]}, {space.points[y]}")
    return not bad, f"{len(elems)} elements, violations: {bad or 'none'}"


# -- 3 ------------------------------------------------------------------------

def nine_letter_vector():
    names = [f"x{i}" for i in range(1, 10)]
    pts = ["e"] + names
    table = [[0 if p == q else 1 for q in pts] for p in pts]
    space = add_formal_inverses(FiniteSpace.from_table(pts, table, ULTRAMETRIC, "e"))
    w = tuple(space.index(n) for n in names)
    theta = match_from_pairs(9, [(1, 9), (4, 8), (2, 3), (5, 6)])
    got = [space.points[i] for i in apply_match(w, theta, space)]
    want = ["x1", "x2", "x2^-1", "x4", "x5", "x5^-1", "e", "x4^-1", "x1^-1"]
    ok = got == want and reduce_word(apply_match(w, theta, space), space) == ()
    return ok, " ".join(got)


# -- 4 ------------------------------------------------------------------------

def scaled_consistency(max_len: int = 6, brute_len: int = 4):
    space = add_formal_inverses(inst.three_point_space())
    ident = plain(space)
    bad = 0
    count = 0
    for n in range(1, max_len + 1):
        for w in cartesian(range(len(space)), repeat=n):
            count += 1
            if graev_norm_scaled(w, ident).value != graev_norm_free(w, space):
                bad += 1
    # a genuine scale: x and x^-1 stretched by 2
    factors = [2 if p.startswith("x") else 1 for p in space.points]
    ss = ScaledSpace(space, linear_scale(factors))
    brute: dict = {}
    for n in range(1, brute_len + 1):
        for w in cartesian(range(len(space)), repeat=n):
            v = min(scaled_match_norm(w, th, ss) for th in enumerate_matches(n))
            f = reduce_word(w, space)
            if f not in brute or v < brute[f]:
                brute[f] = v
    bad_scaled = 0
    for f, v in brute.items():
        if len(f) <= brute_len - 2 and f:
            if graev_norm_scaled(f, ss, length_bound=brute_len).value != v:
                bad_scaled += 1
    ok = bad == 0 and bad_scaled == 0
    return ok, f"identity scale: {count} words, {bad} mismatches; scaled: {bad_scaled} mismatches"


# -- 5 ------------------------------------------------------------------------

def lipschitz_extension(max_len: int = 5):
    space, metric, mapping = inst.lipschitz_instance()
    phi = morphism_from_names(plain(space), metric, mapping)
    rep = check_morphism(phi)
    words = [w for n in range(1, max_len + 1) for w in cartesian(range(len(space)), repeat=n)]
    bad = lipschitz_violations(phi, words, lambda w: graev_norm_free(w, space))
    return rep.ok and not bad, f"{len(words)} words, {len(bad)} violations"


# -- 6 ------------------------------------------------------------------------

def amalgam_ultrametric(max_len: int = 2):
    setup = inst.s3_amalgam()
    elems = setup.elements_up_to(max_len)
    brute_vals: dict = {}
    bad = []

    def norm(f):
        if f not in brute_vals:
            a, b = product_norm(setup, f).value, product_norm_dp(setup, f).value
            if a != b:
                bad.append(f"dp != brute at {setup.label(f)}")
            brute_vals[f] = a
        return brute_vals[f]

    def dist(f, g):
        return norm(setup.multiply(setup.inverse(f), g))

    for f in elems:
        for g in elems:
            dfg = dist(f, g)
            if (dfg == 0) != (f == g) or dfg != dist(g, f):
                bad.append(f"metric axioms at {setup.label(f)}, {setup.label(g)}")
            for h in elems:
                if dist(f, h) > max(dfg, dist(g, h)):
                    bad.append("strong triangle")
    translations = [setup.evaluate([x]) for x in setup.letters()]
    for f in elems:
        for g in elems:
            dfg = dist(f, g)
            for x in translations:
                if dist(setup.multiply(x, f), setup.multiply(x, g)) != dfg:
                    bad.append("left invariance")
                if dist(setup.multiply(f, x), setup.multiply(g, x)) != dfg:
                    bad.append("right invariance")
    for x in setup.union_letters():
        for y in setup.union_letters():
            if dist(setup.evaluate([x]), setup.evaluate([y])) != setup.dist(x, y):
                bad.append(f"extension at {setup.letter_label(x)}, {setup.letter_label(y)}")
    return not bad, f"{len(elems)} elements, {len(brute_vals)} norms, violations: {sorted(set(bad)) or 'none'}"


# -- 7 ------------------------------------------------------------------------

def reduction_value(max_len: int = 2):
    setup = inst.s3_amalgam()
    bad = []
    count = 0
    for f in setup.elements_up_to(max_len):
        ell = setup.reduced_length(f)
        reduced = product_norm(setup, f).value
        free = unrestricted_norms(setup, [f], ell + 2)[f]
        count += 1
        if free != reduced:
            bad.append((setup.label(f), free, reduced))
    return not bad, f"{count} elements, mismatches: {bad or 'none'}"


# -- 8 ------------------------------------------------------------------------

def trivial_words(setup, length: int):
    """All words of a given length that evaluate to the identity, by prefix search."""
    letters = setup.letters()
    out = []

    def go(prefix, value, left):
        if left == 0:
            if value == setup.one:
                out.append(tuple(prefix))
            return
        for x in letters:
            v = setup.append(value, x)
            # a tail of k coset letters needs at least k more letters to cancel
            if len(v.tail) <= left - 1:
                prefix.append(x)
                go(prefix, v, left - 1)
                prefix.pop()

    go([], setup.one, length)
    return out


def forest_builder(max_len: int = 6):
    setup = inst.s3_amalgam()
    count = 0
    bad = []
    for n in range(1, max_len + 1):
        for zeta in trivial_words(setup, n):
            count += 1
            forest = build_maximal_forest(setup, zeta)
            if not (check_forest(setup, zeta, forest).ok and check_maximal(setup, zeta, forest).ok):
                bad.append([setup.letter_label(x) for x in zeta])
    return not bad, f"{count} trivial words, {len(bad)} failures"


# -- 9 ------------------------------------------------------------------------

def two_forests():
    setup, zeta = inst.s6_setup(), inst.s6_word()
    forests = enumerate_maximal_forests(setup, zeta)
    built = build_maximal_forest(setup, zeta)
    ok = len(forests) == 2 and any(same_forest(built, f) for f in forests)
    return ok, f"{len(forests)} maximal forests: {[f.describe() for f in forests]}; builder: {built.describe()}"


# -- 10 -----------------------------------------------------------------------

def example_vectors():
    setup, zeta = inst.example_setup(), inst.example_word()
    out = []
    rules = {}
    for name, ivs in (("F1", inst.EXAMPLE_F1), ("F2", inst.EXAMPLE_F2), ("F3", inst.EXAMPLE_F3)):
        forest = EvaluationForest.from_intervals(ivs)
        rep = check_forest(setup, zeta, forest)
        rep.extend(check_maximal(setup, zeta, forest))
        rules[name] = rep
        out.append(f"{name}: {[str(v) for v in rep] or 'valid'}")
    f1_ix = [v.witness for v in rules["F1"] if v.rule == "item-ix"]
    f2_viii = [v.witness for v in rules["F2"] if v.rule == "item-viii"]
    ok = (any(w[1] == (2, 2) for w in f1_ix)
          and ((1, 13), (14, 20)) in f2_viii
          and rules["F3"].ok)
    return ok, "; ".join(out)


# -- 11 -----------------------------------------------------------------------

def _hnn_instances():
    m = inst.s3_chain_metric()
    g = m.group
    e = g.identity
    a3 = alternating_subgroup(g)
    return [("A = {e}, K = 1", build_hnn(m, (e,), (e,), {e: e}, 1)),
            ("A = A3, phi = id, K = 1/2", build_hnn(m, a3, a3, {a: a for a in a3}, Q(1, 2)))]


def hnn_stable_letter(max_len: int = 4):
    notes = []
    ok = True
    for name, hnn in _hnn_instances():
        stable = stable_letter_norm(hnn)
        viol = restriction_violations(hnn)
        agree, compared = check_subgroup_metric_agreement(hnn, 2)
        su = hnn.with_u
        targets = sorted(su.reachable(2, cap=1), key=su.label)
        letters = su.letters(3)
        free = unrestricted_norms(su, targets, max_len, letters)
        cap_bad = [su.label(f) for f in targets if f in free and free[f] != hnn.norm_u(f)]
        uncovered = [su.label(f) for f in targets if f not in free]
        good = (stable.value == hnn.k and not viol and agree.ok and not cap_bad and not uncovered)
        ok &= good
        notes.append(f"{name}: |t| = {stable.value}, restriction violations {len(viol)}, "
                     f"agreement on {compared}, cap mismatches {len(cap_bad)} of {len(targets)}")
    return ok, "; ".join(notes)


# -- 12 -----------------------------------------------------------------------

def union_retract(max_len: int = 6):
    x = plain(add_formal_inverses(inst.two_point_space("a", 1)))
    y = plain(add_formal_inverses(inst.two_point_space("b", Q(1, 2))))
    union, _ = union_scaled(x, y)
    us, xs = union.space, x.space
    keep = len(xs)
    bad_iso = bad_retract = 0
    count_x = count_u = 0
    for n in range(1, max_len + 1):
        xw = _words(len(xs), n)
        vx = batch_levels(xs, graev_norm_free_batch(xw, xs))
        vu = batch_levels(us, graev_norm_free_batch(xw, us))
        bad_iso += sum(a != b for a, b in zip(vx, vu))
        count_x += len(xw)
        uw = _words(len(us), n)
        full = batch_levels(us, graev_norm_free_batch(uw, us))
        ret = np.array([retract(tuple(w), union, keep) for w in uw.tolist()], dtype=np.uint8)
        back = batch_levels(xs, graev_norm_free_batch(ret, xs))
        bad_retract += sum(b > a for a, b in zip(full, back))
        count_u += len(uw)
    ok = bad_iso == 0 and bad_retract == 0
    return ok, (f"{count_x} words over X: {bad_iso} norm changes; "
                f"{count_u} words over the union: {bad_retract} retract increases")


CRITERIA = [
    (1, "match DP equals brute force over all matches", match_norm_oracle),
    (2, "free-group delta is an invariant ultrametric extending d", free_ultrametric),
    (3, "nine-letter w^theta vector", nine_letter_vector),
    (4, "scaled norm consistency", scaled_consistency),
    (5, "Lipschitz extension into S3", lipschitz_extension),
    (6, "product delta on S3 *_A3 S3", amalgam_ultrametric),
    (7, "unrestricted pairs reach the reduced-pair value", reduction_value),
    (8, "forest builder on all trivial words", forest_builder),
    (9, "S6 word has exactly two maximal forests", two_forests),
    (10, "S4 block word checker vectors", example_vectors),
    (11, "HNN stable letter norm and restriction", hnn_stable_letter),
    (12, "union of spaces and the retract", union_retract),
]


def run_one(number: int) -> CriterionResult:
    _, name, fn = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its message
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


def run_all(quick: bool = False) -> list[CriterionResult]:
    numbers = [c[0] for c in CRITERIA]
    if quick:
        numbers = [n for n in numbers if n not in (1, 8)]
    return [run_one(n) for n in numbers]
