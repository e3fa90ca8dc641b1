"""f-pairs ``(alpha, zeta)`` and the rewriting steps that bring them to reduced form.

Positions in this module are 0-based; forest intervals stay 1-based as in
:mod:`graev.forest`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .forest import EvaluationForest, build_maximal_forest, check_forest, check_maximal
from .report import ValidationError


@dataclass(frozen=True)
class FPair:
    alpha: tuple
    zeta: tuple
    target: object  # ProductElem

    def __len__(self):
        return len(self.alpha)


def make_pair(setup, alpha: Sequence, zeta: Sequence) -> FPair:
    alpha, zeta = tuple(alpha), tuple(zeta)
    if len(alpha) != len(zeta):
        raise ValueError("alpha and zeta differ in length")
    if not setup.is_trivial(zeta):
        raise ValidationError("zeta is not trivial", setup.label(setup.evaluate(zeta)))
    return FPair(alpha, zeta, setup.evaluate(alpha))


def check_pair(setup, p: FPair) -> list[str]:
    """Broken invariants, by name."""
    bad = []
    if len(p.alpha) != len(p.zeta) or not p.alpha:
        bad.append("lengths")
    if not setup.is_trivial(p.zeta):
        bad.append("zeta-trivial")
    if setup.evaluate(p.alpha) != p.target:
        bad.append("alpha-evaluates-to-target")
    return bad


def rho(setup, p: FPair) -> Fraction:
    return setup.rho(p.alpha, p.zeta)


def is_multipliable_pair(setup, p: FPair) -> bool:
    return all(setup.multipliable(a, z) for a, z in zip(p.alpha, p.zeta))


def is_reduced_pair(setup, p: FPair) -> bool:
    """Multipliable with ``alpha`` of minimal length (simplicity is a property of a chosen forest)."""
    return is_multipliable_pair(setup, p) and len(p.alpha) == setup.reduced_length(p.target)


def best_common_point(setup, x, y) -> int:
    """The ``a`` in ``A`` minimising ``max(d(x, a), d(a, y))``, smallest index on ties."""
    best, arg = None, None
    for a in range(setup.a_group.order):
        la = setup.a_letter(a)
        v = max(setup.dist(x, la), setup.dist(la, y))
        if best is None or v < best:
            best, arg = v, a
    return arg


def make_multipliable(setup, p: FPair) -> FPair:
    """Split every clashing position ``i`` into ``alpha(i) a^-1, a`` over ``e, zeta(i)``."""
    alpha, zeta = [], []
    for x, z in zip(p.alpha, p.zeta):
        if setup.multipliable(x, z):
            alpha.append(x)
            zeta.append(z)
            continue
        a = best_common_point(setup, x, z)
        la = setup.a_letter(a)
        alpha.extend([setup.letter_mul(x, setup.letter_inv(la)), la])
        zeta.extend([setup.one_letter(), z])
    return FPair(tuple(alpha), tuple(zeta), p.target)


def transfer(setup, p: FPair, i: int, a: int) -> FPair:
    """Right-multiply position ``i`` by ``a^-1`` and left-multiply ``i + 1`` by ``a``, in both words."""
    if not 0 <= i < len(p) - 1:
        raise IndexError(f"transfer index {i} out of range for length {len(p)}")
    la = setup.a_letter(a)
    lai = setup.letter_inv(la)

    def move(word):
        w = list(word)
        w[i] = setup.letter_mul(w[i], lai)
        w[i + 1] = setup.letter_mul(la, w[i + 1])
        return tuple(w)

    return FPair(move(p.alpha), move(p.zeta), p.target)


def _check_forest_for(setup, zeta, forest: EvaluationForest, maximal: bool = True):
    rep = check_forest(setup, zeta, forest)
    if rep.ok and maximal:
        rep = check_maximal(setup, zeta, forest)
    if not rep.ok:
        raise ValidationError(f"forest does not fit the word: {rep}", rep.violations[0].witness)


def transfer_order(forest: EvaluationForest) -> list[int]:
    """Nodes to transfer at, in increasing right endpoint; the last root is left out.

    A transfer at ``M(I_t)`` only disturbs the node starting at ``M(I_t) + 1``,
    which always lies to the right, so this order never undoes earlier work.
    """
    roots = forest.roots()
    nodes = [t for t in range(len(forest)) if t != roots[-1]]
    return sorted(nodes, key=lambda t: forest.intervals[t][1])


def make_simple(setup, p: FPair, forest: EvaluationForest, checked: bool = True) -> FPair:
    """Transfers that make every node interval of ``zeta`` evaluate to ``e``."""
    if checked:
        _check_forest_for(setup, p.zeta, forest)
    q = p
    for t in transfer_order(forest):
        m, M = forest.intervals[t]
        a = setup.evaluate(q.zeta[m - 1:M]).head
        if a != setup.a_group.identity:
            q = transfer(setup, q, M - 1, a)
    return q


def is_simple(setup, p: FPair, forest: EvaluationForest) -> bool:
    return all(setup.evaluate(p.zeta[m - 1:M]) == setup.one for m, M in forest.intervals)


def admissibility(setup, p: FPair, forest: EvaluationForest, t: int, ks: Sequence[int]) -> list[str]:
    """Failed conditions for symmetrising at node ``t`` over positions ``ks`` (1-based)."""
    bad = []
    rem = set(forest.remainder(t))
    if not ks or any(k not in rem for k in ks) or list(ks) != sorted(set(ks)):
        bad.append("positions-in-remainder")
        return bad
    if any(setup.letter_in_a(p.zeta[k - 1]) is not None for k in ks):
        bad.append("listed-letters-outside-A")
    one = setup.one_letter()
    if any(p.zeta[j - 1] != one for j in rem - set(ks)):
        bad.append("other-remainder-letters-trivial")
    for s in forest.children(t):
        m, M = forest.intervals[s]
        if setup.evaluate(p.zeta[m - 1:M]) != setup.one:
            bad.append("children-evaluate-to-e")
            break
    m, M = forest.intervals[t]
    if setup.evaluate(p.zeta[m - 1:M]) != setup.one:
        bad.append("node-evaluates-to-e")
    return bad


def symmetrized_letter(setup, letters: Sequence, k0: int):
    """``x`` with ``g_1 ... g_{k0-1} x g_{k0+1} ... g_m = e`` (``k0`` 1-based)."""
    before = [setup.letter_inv(g) for g in reversed(letters[:k0 - 1])]
    after = [setup.letter_inv(g) for g in reversed(letters[k0:])]
    x = setup.one_letter()
    for g in before + after:
        x = setup.letter_mul(x, g)
    return x


def symmetrize(setup, p: FPair, forest: EvaluationForest, t: int, ks: Sequence[int], k0: int) -> FPair:
    """Copy ``alpha`` onto the listed positions except the pivot ``ks[k0 - 1]``, which compensates."""
    bad = admissibility(setup, p, forest, t, ks)
    if bad:
        raise ValidationError(f"list {list(ks)} is not admissible at node {forest.intervals[t]}", bad)
    if not 1 <= k0 <= len(ks):
        raise IndexError("pivot outside the list")
    letters = [p.alpha[k - 1] for k in ks]
    zeta = list(p.zeta)
    for k in ks:
        zeta[k - 1] = p.alpha[k - 1]
    zeta[ks[k0 - 1] - 1] = symmetrized_letter(setup, letters, k0)
    return FPair(p.alpha, tuple(zeta), p.target)


def can_shorten(setup, p: FPair, i: int) -> bool:
    quad = [p.alpha[i], p.alpha[i + 1], p.zeta[i], p.zeta[i + 1]]
    return all(setup.multipliable(x, y) for x in quad for y in quad)


def shorten(setup, p: FPair, i: int) -> FPair:
    """Merge positions ``i`` and ``i + 1`` of both words."""
    if not 0 <= i < len(p) - 1:
        raise IndexError(f"shorten index {i} out of range for length {len(p)}")
    if not can_shorten(setup, p, i):
        raise ValidationError("letters at i, i+1 are not pairwise multipliable", i)

    def merge(word):
        return word[:i] + (setup.letter_mul(word[i], word[i + 1]),) + word[i + 2:]

    return FPair(merge(p.alpha), merge(p.zeta), p.target)


@dataclass(frozen=True)
class TraceStep:
    op: str
    detail: object
    pair: FPair
    rho: Fraction


def to_reduced_pair(setup, p: FPair, trace: list | None = None) -> FPair:
    """Multipliable, then simple, then shorten until ``alpha`` has minimal length."""
    def log(op, detail, q):
        if trace is not None:
            trace.append(TraceStep(op, detail, q, rho(setup, q)))

    log("start", None, p)
    q = make_multipliable(setup, p)
    if len(q) != len(p):
        log("make_multipliable", None, q)
    target_len = setup.reduced_length(p.target)
    while True:
        forest = build_maximal_forest(setup, q.zeta)
        q2 = make_simple(setup, q, forest, checked=False)
        if q2 != q:
            q = q2
            log("make_simple", forest.describe(), q)
        if len(q) == target_len:
            return q
        i = _same_side_pair(setup, q.alpha)
        if i is not None:
            q = shorten(setup, q, i)
            log("shorten", i, q)
            continue
        i = next((k for k, x in enumerate(q.alpha) if setup.letter_in_a(x) is not None), None)
        if i is None:
            raise AssertionError("alpha alternates without A letters but is not of minimal length")
        t = forest.node_of_remainder(i + 1)
        rem = forest.remainder(t)
        if len(rem) >= 2:
            j = max(k for k in rem if k != i + 1)
            q = symmetrize(setup, q, forest, t, rem, rem.index(j) + 1)
            log("symmetrize", {"node": forest.intervals[t], "pivot": j}, q)
        k = i if i + 1 < len(q) else i - 1
        q = shorten(setup, q, k)
        log("shorten", k, q)


def _same_side_pair(setup, alpha: Sequence):
    for i in range(len(alpha) - 1):
        x, y = alpha[i], alpha[i + 1]
        if setup.letter_in_a(x) is None and setup.letter_in_a(y) is None and x[0] == y[0]:
            return i
    return None
