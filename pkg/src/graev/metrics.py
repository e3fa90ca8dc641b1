"""Invariant ultrametrics on finite groups.

A metric is stored as a sorted tuple of distance ``levels`` (``levels[0] == 0``)
and an integer code matrix into it, so comparisons and maxima run on small
integers with numpy and only the final answers become Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import FiniteGroup
from .rationals import parse_rational
from .report import ValidationError, ValidationReport
from .scales import StepScale

EXHAUSTIVE_ORDER = 24


@dataclass(frozen=True, eq=False)
class InvariantUltrametric:
    group: FiniteGroup
    levels: tuple[Fraction, ...]
    code: np.ndarray

    def d(self, x: int, y: int) -> Fraction:
        return self.levels[self.code[x, y]]

    def norm(self, x: int) -> Fraction:
        return self.levels[self.code[x, self.group.identity]]

    def norm_codes(self) -> np.ndarray:
        return self.code[:, self.group.identity]

    def diameter(self, subset: Sequence[int] | None = None) -> Fraction:
        if subset is None:
            return self.levels[int(self.code.max())]
        idx = np.asarray(subset)
        return self.levels[int(self.code[np.ix_(idx, idx)].max())]

    def dist_to_set(self, x: int, subset: Sequence[int]) -> Fraction:
        return self.levels[int(self.code[x, np.asarray(subset)].min())]

    @classmethod
    def from_table(cls, group: FiniteGroup, table) -> "InvariantUltrametric":
        vals = [[parse_rational(v) for v in row] for row in table]
        levels = sorted({v for row in vals for v in row} | {Fraction(0)})
        pos = {v: i for i, v in enumerate(levels)}
        code = np.array([[pos[v] for v in row] for row in vals], dtype=np.int16)
        if code.shape != (group.order, group.order):
            raise ValidationError("metric table does not match the group order", code.shape)
        return cls(group, tuple(levels), code)

    @classmethod
    def from_norm(cls, group: FiniteGroup, norm: Sequence) -> "InvariantUltrametric":
        """Left-invariant metric ``d(x, y) = ||x^-1 y||``."""
        vals = [parse_rational(v) for v in norm]
        levels = sorted(set(vals) | {Fraction(0)})
        pos = {v: i for i, v in enumerate(levels)}
        ncode = np.array([pos[v] for v in vals], dtype=np.int16)
        code = ncode[group.table[group.inverse[:, None], np.arange(group.order)[None, :]]]
        return cls(group, tuple(levels), code)

    def table(self) -> list[list[Fraction]]:
        return [[self.levels[c] for c in row] for row in self.code.tolist()]


def discrete_metric(group: FiniteGroup, value=1) -> InvariantUltrametric:
    return metric_from_chain(group, NormalChain([tuple(range(group.order)), (group.identity,)], [value]))


@dataclass(frozen=True)
class NormalChain:
    subgroups: Sequence[Sequence[int]]
    values: Sequence

    def check(self, group: FiniteGroup, require_normal: bool = True) -> ValidationReport:
        report = ValidationReport("normal chain")
        subs = [frozenset(s) for s in self.subgroups]
        vals = [parse_rational(v) for v in self.values]
        if not subs or subs[0] != frozenset(range(group.order)):
            report.add("top-is-whole-group", None)
        if not subs or subs[-1] != frozenset([group.identity]):
            report.add("bottom-is-trivial", None)
        if len(vals) != len(subs) - 1:
            report.add("value-count", (len(vals), len(subs)))
        for i, s in enumerate(subs):
            if not group.is_subgroup(s):
                report.add("subgroup", i)
            elif require_normal and not group.is_normal(s):
                report.add("normal", i)
            if i and not s <= subs[i - 1]:
                report.add("descending", i)
        for i, v in enumerate(vals):
            if v <= 0:
                report.add("positive-values", i)
            if i and not vals[i] < vals[i - 1]:
                report.add("decreasing-values", i)
        return report


def metric_from_chain(group: FiniteGroup, chain: NormalChain, check_normal: bool = True) -> InvariantUltrametric:
    """``d(x, y) = r_j`` for the largest ``j`` with ``x^-1 y`` in ``N_j``.

    ``check_normal=False`` admits chains of non-normal subgroups, which give
    metrics that are only left invariant (useful as counterexamples).
    """
    rep = chain.check(group, require_normal=check_normal)
    if not rep.ok:
        raise ValidationError(f"invalid chain: {rep}", rep.violations[0].witness)
    vals = [parse_rational(v) for v in chain.values]
    norm = [Fraction(0)] * group.order
    for j, sub in enumerate(chain.subgroups[:-1]):
        for x in sub:
            norm[x] = vals[j]
    norm[group.identity] = Fraction(0)
    return InvariantUltrametric.from_norm(group, norm)


def _first(mask: np.ndarray):
    hit = np.argwhere(mask)
    return tuple(int(v) for v in hit[0]) if len(hit) else None


def _invariance_witness(m: InvariantUltrametric, left: bool):
    g, code = m.group, m.code
    for f in g.generating_set():
        perm = g.table[f] if left else g.table[:, f]
        w = _first(code[np.ix_(perm, perm)] != code)
        if w is not None:
            return f, w
    return None


def prop_product_inequality(m: InvariantUltrametric, max_factors: int = 3,
                            samples: int = 2000, seed: int = 0) -> list:
    """Check ``d(g1...gn, f1...fn) <= max d(gi, fi)`` for ``n <= max_factors``.

    Exhaustive for groups of order at most 24: ``best[P, Q]`` holds the least
    possible right-hand side over all factorisations of ``(P, Q)`` into ``n``
    pairs, extended one factor at a time, so comparing it with ``d(P, Q)``
    covers every tuple.  Larger groups are sampled.  Returns violations as
    ``(n, P, Q)`` triples (or sampled tuples).
    """
    g, code = m.group, m.code
    n = g.order
    bad = []
    if n <= EXHAUSTIVE_ORDER:
        best = code.copy()
        for k in range(2, max_factors + 1):
            nxt = np.full_like(best, np.iinfo(best.dtype).max)
            for a in range(n):
                # rows P = X a over every X; columns Q = Y b
                rows = g.table[:, a]
                for b in range(n):
                    cand = np.maximum(best, code[a, b])
                    cols = g.table[:, b]
                    sub = nxt[np.ix_(rows, cols)]
                    nxt[np.ix_(rows, cols)] = np.minimum(sub, cand)
            best = nxt
            w = _first(code > best)
            if w is not None:
                bad.append((k,) + w)
        return bad
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        k = int(rng.integers(2, max_factors + 1))
        gs = rng.integers(0, n, size=k)
        fs = rng.integers(0, n, size=k)
        lhs = code[g.product(gs.tolist()), g.product(fs.tolist())]
        if lhs > code[gs, fs].max():
            bad.append((k, tuple(gs.tolist()), tuple(fs.tolist())))
    return bad


def validate_biinvariance(m: InvariantUltrametric) -> ValidationReport:
    """Empty iff ``m`` is a two-sided invariant ultrametric on its group."""
    g, code = m.group, m.code
    lab = g.labels
    report = ValidationReport("bi-invariant ultrametric")
    n = g.order
    if code.shape != (n, n):
        report.add("shape", code.shape)
        return report
    w = _first(np.diag(code) != 0)
    if w is not None:
        report.add("zero-diagonal", lab[w[0]])
    w = _first(code != code.T)
    if w is not None:
        report.add("symmetry", (lab[w[0]], lab[w[1]]))
    off = code + np.eye(n, dtype=code.dtype)
    w = _first(off == 0)
    if w is not None:
        report.add("positivity", (lab[w[0]], lab[w[1]]))
    left = _invariance_witness(m, left=True)
    if left:
        f, (x, y) = left
        report.add("left-invariance", (lab[f], lab[x], lab[y]))
    right = _invariance_witness(m, left=False)
    if right:
        f, (x, y) = right
        report.add("right-invariance", (lab[f], lab[x], lab[y]))
    if left is None:
        # with left invariance d(x,z) <= max(d(x,y), d(y,z)) reduces to the norm inequality
        nc = m.norm_codes()
        w = _first(nc[g.table] > np.maximum(nc[:, None], nc[None, :]))
        if w is not None:
            a, b = w
            report.add("ultrametric-inequality", (lab[g.identity], lab[g.mul(a, b)], lab[a]))
    elif n <= 64:
        for y in range(n):
            w = _first(code > np.maximum(code[:, y][:, None], code[y][None, :]))
            if w is not None:
                report.add("ultrametric-inequality", (lab[w[0]], lab[w[1]], lab[y]))
                break
    if report.ok:
        for v in prop_product_inequality(m):
            report.add("product-inequality", v)
            break
    return report


def norm_table(m: InvariantUltrametric) -> list[Fraction]:
    """``||g|| = d(g, e)`` for every element, after checking the norm laws."""
    g = m.group
    nc = m.norm_codes()
    if (nc[g.inverse] != nc).any():
        raise ValidationError("norm is not symmetric", _first(nc[g.inverse] != nc))
    w = _first(nc[g.table] > np.maximum(nc[:, None], nc[None, :]))
    if w is not None:
        raise ValidationError("norm violates the ultrametric inequality", w)
    return [m.levels[c] for c in nc.tolist()]


def is_conjugation_invariant(m: InvariantUltrametric) -> bool:
    g = m.group
    nc = m.norm_codes()
    for x in g.generating_set():
        if (nc[g.table[g.table[g.inverse[x]], x]] != nc).any():
            return False
    return True


def canonical_scale(m: InvariantUltrametric) -> StepScale:
    """Per-element step function ``r -> max(r, max{||g^-1 h g|| : ||h|| <= r})``.

    The ball ``{h : ||h|| <= r}`` only changes at metric levels, so the step
    form with thresholds at the levels is exact for every ``r``.
    """
    g = m.group
    nc = m.norm_codes()
    n = g.order
    # conj_codes[x, h] = code of ||x^-1 h x||
    xs = np.arange(n)
    inner = g.table[g.inverse[xs][:, None], xs[None, :]]      # x^-1 h
    conj_codes = nc[g.table[inner, xs[:, None]]]              # (x^-1 h) x
    rows = []
    for x in range(n):
        row = []
        for j in range(len(m.levels)):
            ball = nc <= j
            row.append(m.levels[int(conj_codes[x][ball].max())])
        rows.append(tuple(row))
    return StepScale(tuple(m.levels), tuple(rows))
