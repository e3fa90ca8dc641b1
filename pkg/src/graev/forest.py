"""Evaluation forests for words whose product lies in the common subgroup ``A``.

Intervals are 1-based and inclusive, written ``(m, M)``.  A forest is stored
as a tuple of intervals plus a parent index per node (``None`` for roots).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .report import ValidationError, ValidationReport

Interval = tuple  # (m, M), 1-based inclusive


@dataclass(frozen=True)
class EvaluationForest:
    intervals: tuple[Interval, ...]
    parent: tuple  # index of parent node or None

    @classmethod
    def from_intervals(cls, intervals: Sequence[Interval]) -> "EvaluationForest":
        """Parents from containment: the smallest strictly larger interval that contains a node."""
        ivs = sorted({(int(m), int(M)) for m, M in intervals}, key=lambda iv: (iv[0], -iv[1]))
        parent = []
        for i, (m, M) in enumerate(ivs):
            best = None
            for j, (m2, M2) in enumerate(ivs):
                if j != i and m2 <= m and M <= M2 and (m2, M2) != (m, M):
                    if best is None or M2 - m2 < ivs[best][1] - ivs[best][0]:
                        best = j
            parent.append(best)
        return cls(tuple(ivs), tuple(parent))

    def __len__(self):
        return len(self.intervals)

    def children(self, t: int) -> list[int]:
        kids = [s for s, p in enumerate(self.parent) if p == t]
        return sorted(kids, key=lambda s: self.intervals[s][0])

    def roots(self) -> list[int]:
        return sorted((t for t, p in enumerate(self.parent) if p is None), key=lambda t: self.intervals[t][0])

    def ancestors(self, t: int) -> list[int]:
        out, p = [], self.parent[t]
        while p is not None and p not in out:
            out.append(p)
            p = self.parent[p]
        return out

    def below(self, s: int, t: int) -> bool:
        """``s`` strictly below ``t``."""
        return t in self.ancestors(s)

    def remainder(self, t: int) -> list[int]:
        m, M = self.intervals[t]
        covered = set()
        for s in self.children(t):
            a, b = self.intervals[s]
            covered.update(range(a, b + 1))
        return [i for i in range(m, M + 1) if i not in covered]

    def height(self, t: int) -> int:
        kids = self.children(t)
        return 0 if not kids else 1 + max(self.height(s) for s in kids)

    def node_of_remainder(self, i: int) -> int:
        """The node whose remainder contains position ``i``."""
        best = None
        for t, (m, M) in enumerate(self.intervals):
            if m <= i <= M and (best is None or M - m < self.intervals[best][1] - self.intervals[best][0]):
                best = t
        if best is None:
            raise ValueError(f"position {i} is not covered")
        return best

    def key(self) -> tuple:
        return tuple(sorted(zip(self.intervals, (None if p is None else self.intervals[p] for p in self.parent)),
                            key=lambda kv: (kv[0][0], -kv[0][1])))

    def describe(self) -> str:
        def show(t):
            m, M = self.intervals[t]
            kids = self.children(t)
            inner = "{" + ", ".join(show(s) for s in kids) + "}" if kids else ""
            return f"[{m},{M}]" + (" > " + inner if inner else "")
        return "; ".join(show(r) for r in self.roots())

    def to_json(self) -> dict:
        return {"nodes": [{"id": t, "interval": [m, M], "parent": self.parent[t]}
                          for t, (m, M) in enumerate(self.intervals)]}

    @classmethod
    def from_json(cls, data: dict) -> "EvaluationForest":
        nodes = sorted(data["nodes"], key=lambda n: n["id"])
        return cls(tuple(tuple(n["interval"]) for n in nodes), tuple(n.get("parent") for n in nodes))


class _Evaluator:
    """Memoised ``zeta^(J) in A`` tests for one word."""

    def __init__(self, setup, zeta: Sequence):
        self.setup = setup
        self.zeta = list(zeta)
        self._cache: dict = {}

    def value(self, m: int, M: int):
        key = (m, M)
        if key not in self._cache:
            self._cache[key] = self.setup.evaluate(self.zeta[m - 1:M])
        return self._cache[key]

    def in_a(self, m: int, M: int) -> bool:
        return not self.value(m, M).tail

    def decomposition(self, m: int, M: int):
        for k in range(m, M):
            if self.in_a(m, k) and self.in_a(k + 1, M):
                return (m, k), (k + 1, M)
        return None


def _multipliable_word(setup, letters: Sequence) -> bool:
    sides = {x[0] for x in letters if setup.letter_in_a(x) is None}
    return len(sides) <= 1


def check_structure(forest: EvaluationForest, n: int) -> ValidationReport:
    """Items (i)-(v): the forest is an evaluation forest on ``[1, n]``."""
    report = ValidationReport("evaluation forest structure")
    ivs = forest.intervals
    for t, (m, M) in enumerate(ivs):
        if not (1 <= m <= M <= n):
            report.add("item-i", (m, M), "not a non-empty subinterval")
    for t, p in enumerate(forest.parent):
        if p is not None and (not 0 <= p < len(ivs) or t in forest.ancestors(t)):
            report.add("tree", ivs[t], "parent links do not form a forest")
            return report
    covered = []
    for r in forest.roots():
        covered.extend(range(ivs[r][0], ivs[r][1] + 1))
    if sorted(covered) != list(range(1, n + 1)):
        report.add("item-ii", [ivs[r] for r in forest.roots()], "roots do not partition [1, n]")
    for s in range(len(ivs)):
        for t in range(len(ivs)):
            if s == t:
                continue
            (a, b), (c, d) = ivs[s], ivs[t]
            comparable = forest.below(s, t) or forest.below(t, s)
            meets = not (b < c or d < a)
            if meets != comparable and s < t:
                report.add("item-iii", (ivs[s], ivs[t]))
            if forest.below(s, t) != (c <= a and b <= d):
                report.add("item-iv", (ivs[s], ivs[t]))
            if forest.below(s, t) and not (c < a <= b < d):
                report.add("item-v", (ivs[s], ivs[t]), "containment is not strict at both ends")
    return report


def check_forest(setup, zeta: Sequence, forest: EvaluationForest, _ev: _Evaluator | None = None) -> ValidationReport:
    """Items (i)-(vii) of an evaluation forest for ``zeta``."""
    ev = _ev or _Evaluator(setup, zeta)
    n = len(zeta)
    report = ValidationReport("evaluation forest")
    if ev.value(1, n).tail:
        report.add("evaluates-into-A", None, "the word does not evaluate into A")
    report.extend(check_structure(forest, n))
    if not report.ok:
        return report
    for t, (m, M) in enumerate(forest.intervals):
        if not ev.in_a(m, M):
            report.add("item-vi", (m, M), f"product {setup.label(ev.value(m, M))} is not in A")
        rem = forest.remainder(t)
        if not rem:
            report.add("item-v", (m, M), "empty remainder")
        elif not _multipliable_word(setup, [zeta[i - 1] for i in rem]):
            report.add("item-vii", ((m, M), tuple(rem)), "remainder is not multipliable")
    return report


def is_decomposable(setup, zeta: Sequence, interval: Interval, _ev: _Evaluator | None = None):
    """Leftmost split ``I = J1 + J2`` with both halves evaluating into ``A``, or ``None``."""
    ev = _ev or _Evaluator(setup, zeta)
    return ev.decomposition(*interval)


def check_maximal(setup, zeta: Sequence, forest: EvaluationForest, _ev: _Evaluator | None = None) -> ValidationReport:
    """Items (viii) and (ix); assumes :func:`check_forest` passes."""
    ev = _ev or _Evaluator(setup, zeta)
    report = ValidationReport("maximal evaluation forest")
    for t, (m, M) in enumerate(forest.intervals):
        split = ev.decomposition(m, M)
        if split is not None:
            report.add("item-viii", split, f"[{m},{M}] is decomposable")
        kids = [forest.intervals[s] for s in forest.children(t)]
        covered = set()
        for a, b in kids:
            covered.update(range(a, b + 1))
        for a in range(m, M + 1):
            for b in range(a, M + 1):
                if (a, b) == (m, M) or not ev.in_a(a, b):
                    continue
                if not all(b2 < a or b < a2 or (a <= a2 and b2 <= b) for a2, b2 in kids):
                    continue
                if not set(range(a, b + 1)) <= covered:
                    report.add("item-ix", ((m, M), (a, b)), f"J = [{a},{b}] meets the remainder of [{m},{M}]")
    return report


# -- construction -------------------------------------------------------------

@dataclass
class _Node:
    m: int
    M: int
    kids: list


def _shift(nodes: list, by: int) -> list:
    return [_Node(n.m + by, n.M + by, _shift(n.kids, by)) for n in nodes]


def _walk(nodes: list):
    for n in nodes:
        yield n
        yield from _walk(n.kids)


def _build(setup, zeta: list) -> list:
    n = len(zeta)
    ev = _Evaluator(setup, zeta)
    if n == 1:
        return [_Node(1, 1, [])]
    split = ev.decomposition(1, n)
    if split is not None:
        (_, k), _ = split
        return _build(setup, zeta[:k]) + _shift(_build(setup, zeta[k:]), k)
    found = None
    for m in range(1, n + 1):
        for M in range(m + 1, n + 1):
            if (m, M) != (1, n) and ev.in_a(m, M):
                found = (m, M)
                break
        if found:
            break
    if found is None:
        a_pos = [i for i in range(1, n + 1) if setup.letter_in_a(zeta[i - 1]) is not None]
        return [_Node(1, n, [_Node(i, i, []) for i in a_pos])]
    jm, jM = found
    size = jM - jm + 1
    a = ev.value(jm, jM)
    zeta1 = zeta[:jm - 1] + [setup.a_letter(a.head)] + zeta[jM:]
    forest1 = _build(setup, zeta1)

    def inflate(nodes):
        out = []
        for nd in nodes:
            if nd.M < jm:
                m2, M2 = nd.m, nd.M
            elif nd.m <= jm <= nd.M:
                m2, M2 = nd.m, nd.M + size - 1
            else:
                m2, M2 = nd.m + size - 1, nd.M + size - 1
            out.append(_Node(m2, M2, inflate(nd.kids)))
        return out

    forest1 = inflate(forest1)
    t0 = next((nd for nd in _walk(forest1) if (nd.m, nd.M) == (jm, jM)), None)
    if t0 is None:
        raise AssertionError("no singleton node for the collapsed letter")
    decomposable = [nd for nd in _walk(forest1) if ev.decomposition(nd.m, nd.M) is not None]
    t1 = max(decomposable, key=lambda nd: nd.M - nd.m) if decomposable else t0
    forest2 = _shift(_build(setup, zeta[t1.m - 1:t1.M]), t1.m - 1)

    def graft(nodes):
        out = []
        for nd in nodes:
            if nd is t1:
                out.extend(forest2)
            else:
                out.append(_Node(nd.m, nd.M, graft(nd.kids)))
        return out

    if any(r is t1 for r in forest1):
        raise AssertionError("the node to replace is a root")
    return graft(forest1)


def _to_forest(roots: list) -> EvaluationForest:
    ivs, parent = [], []

    def add(nd, p):
        ivs.append((nd.m, nd.M))
        parent.append(p)
        me = len(ivs) - 1
        for k in nd.kids:
            add(k, me)

    for r in roots:
        add(r, None)
    return EvaluationForest(tuple(ivs), tuple(parent))


def build_maximal_forest(setup, zeta: Sequence) -> EvaluationForest:
    """Maximal evaluation forest by the inductive construction (split, collapse-and-graft, or flat)."""
    zeta = list(zeta)
    if not zeta:
        raise ValueError("empty word")
    if setup.evaluate(zeta).tail:
        raise ValidationError("the word does not evaluate into A", None)
    return _to_forest(_build(setup, zeta))


def enumerate_maximal_forests(setup, zeta: Sequence, limit: int = 100000) -> list[EvaluationForest]:
    """Every maximal evaluation forest, by exhaustive search over laminar interval families."""
    zeta = list(zeta)
    n = len(zeta)
    ev = _Evaluator(setup, zeta)
    if ev.value(1, n).tail:
        raise ValidationError("the word does not evaluate into A", None)
    cand = {(m, M) for m in range(1, n + 1) for M in range(m, n + 1)
            if ev.in_a(m, M) and ev.decomposition(m, M) is None}
    budget = [limit]

    def tick():
        budget[0] -= 1
        if budget[0] < 0:
            raise OverflowError(f"more than {limit} partial forests")

    def subtrees(m, M):
        # every way to fill the inside of a node (m, M) with disjoint child trees
        return [[_Node(m, M, kids)] for kids in families(m + 1, M - 1, cover=False)]

    def families(lo, hi, cover):
        """Lists of disjoint trees inside [lo, hi]; ``cover`` demands an exact partition."""
        if lo > hi:
            return [[]]
        out = []
        if not cover:
            for rest in families(lo + 1, hi, cover):
                tick()
                out.append(rest)
        for M in range(lo, hi + 1):
            if (lo, M) not in cand:
                continue
            for tree in subtrees(lo, M):
                for rest in families(M + 1, hi, cover):
                    tick()
                    out.append(tree + rest)
        return out

    result, seen = [], set()
    for roots in families(1, n, cover=True):
        forest = _to_forest(roots)
        if not check_forest(setup, zeta, forest, ev).ok:
            continue
        if not check_maximal(setup, zeta, forest, ev).ok:
            continue
        if forest.key() not in seen:
            seen.add(forest.key())
            result.append(forest)
    return result


def same_forest(a: EvaluationForest, b: EvaluationForest) -> bool:
    return a.key() == b.key()
