"""Finite (ultra)metric spaces with exact distances.

A :class:`FiniteSpace` is a finite list of named points with a symmetric table
of :class:`~fractions.Fraction` distances.  It may carry a basepoint ``e``
(a pointed space) and an isometric involution ``inv`` (formal inverses), in
which case it is the alphabet of a free group.

Points of different spaces are identified only through explicit
correspondence tables, never by name.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rationals import ZERO, parse_rational
from .report import ValidationError, ValidationReport

METRIC = "metric"
ULTRAMETRIC = "ultrametric"
MODES = (METRIC, ULTRAMETRIC)


def combine(mode: str, a: Fraction, b: Fraction) -> Fraction:
    """Sum in metric mode, max in ultrametric mode."""
    if mode == ULTRAMETRIC:
        return a if a >= b else b
    return a + b


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]
    mode: str = ULTRAMETRIC
    basepoint: int | None = None
    inv: tuple[int, ...] | None = None

    def __post_init__(self):
        check_mode(self.mode)
        n = len(self.points)
        if len(set(self.points)) != n:
            raise ValueError("point names must be distinct")
        if len(self.dist) != n or any(len(row) != n for row in self.dist):
            raise ValueError("distance table must be square and match the point list")
        if self.basepoint is not None and not 0 <= self.basepoint < n:
            raise ValueError("basepoint is not a point of the space")
        if self.inv is not None and len(self.inv) != n:
            raise ValueError("involution table has the wrong length")

    @classmethod
    def from_table(cls, points: Sequence[str], table, mode: str = ULTRAMETRIC,
                   basepoint: str | int | None = None, inv=None) -> "FiniteSpace":
        dist = tuple(tuple(parse_rational(v) for v in row) for row in table)
        space = cls(tuple(points), dist, mode)
        bp = space.index(basepoint) if isinstance(basepoint, str) else basepoint
        inv_t = None
        if inv is not None:
            inv_t = tuple(space.index(v) if isinstance(v, str) else int(v) for v in inv)
        return cls(tuple(points), dist, mode, bp, inv_t)

    @classmethod
    def from_function(cls, points: Sequence[str], d, mode: str = ULTRAMETRIC,
                      basepoint: str | None = None) -> "FiniteSpace":
        table = [[Fraction(0) if p == q else parse_rational(d(p, q)) for q in points] for p in points]
        return cls.from_table(points, table, mode, basepoint)

    def __len__(self):
        return len(self.points)

    def index(self, name: str) -> int:
        try:
            return self.points.index(name)
        except ValueError:
            raise KeyError(f"no point named {name!r}") from None

    def d(self, p: int, q: int) -> Fraction:
        return self.dist[p][q]

    @property
    def e(self) -> int:
        if self.basepoint is None:
            raise ValueError("space has no basepoint")
        return self.basepoint

    @property
    def is_symmetric(self) -> bool:
        return self.basepoint is not None and self.inv is not None

    def inverse(self, p: int) -> int:
        if self.inv is None:
            raise ValueError("space has no formal inverses")
        return self.inv[p]

    def values(self) -> list[Fraction]:
        """Sorted distinct distance values, including 0."""
        return sorted({v for row in self.dist for v in row} | {ZERO})

    def restrict(self, indices: Iterable[int]) -> "FiniteSpace":
        idx = list(indices)
        return FiniteSpace(tuple(self.points[i] for i in idx),
                           tuple(tuple(self.dist[i][j] for j in idx) for i in idx),
                           self.mode)

    def with_basepoint(self, basepoint: str | int) -> "FiniteSpace":
        bp = self.index(basepoint) if isinstance(basepoint, str) else basepoint
        return FiniteSpace(self.points, self.dist, self.mode, bp, self.inv)


def validate_space(s: FiniteSpace) -> ValidationReport:
    """Check the (ultra)metric axioms, reporting every violation with its witness.

    Witnesses are point-name tuples.  The triangle check runs over all triples,
    so this is cubic in the number of points.
    """
    report = ValidationReport(f"{s.mode} space")
    n = len(s.points)
    names = s.points
    for p in range(n):
        if s.dist[p][p] != 0:
            report.add("zero-diagonal", (names[p],), f"d = {s.dist[p][p]}")
    for p in range(n):
        for q in range(p + 1, n):
            if s.dist[p][q] != s.dist[q][p]:
                report.add("symmetry", (names[p], names[q]))
            if s.dist[p][q] <= 0 or s.dist[q][p] <= 0:
                report.add("positivity", (names[p], names[q]))
    ultra = s.mode == ULTRAMETRIC
    for p in range(n):
        row_p = s.dist[p]
        for r in range(n):
            dpr = row_p[r]
            row_r = s.dist[r]
            for q in range(n):
                bound = max(dpr, row_r[q]) if ultra else dpr + row_r[q]
                if row_p[q] > bound:
                    rule = "ultrametric-inequality" if ultra else "triangle-inequality"
                    report.add(rule, (names[p], names[q], names[r]),
                               f"d(p,q) = {row_p[q]} > {bound}")
    if s.basepoint is not None and not 0 <= s.basepoint < n:
        report.add("basepoint", s.basepoint)
    if s.inv is not None:
        for p in range(n):
            if s.inv[s.inv[p]] != p:
                report.add("involution", (names[p],))
        if s.basepoint is not None and s.inv[s.basepoint] != s.basepoint:
            report.add("inverse-of-basepoint", (names[s.basepoint],))
        for p in range(n):
            for q in range(n):
                if s.dist[s.inv[p]][s.inv[q]] != s.dist[p][q]:
                    report.add("isometric-involution", (names[p], names[q]))
    return report


def amalgam_distance(mode: str, to_common_x: Sequence[Fraction], to_common_y: Sequence[Fraction]) -> Fraction:
    """Minimum over common points ``a`` of ``d(x,a) (+|max) d(a,y)``."""
    return min(combine(mode, dx, dy) for dx, dy in zip(to_common_x, to_common_y))


def amalgam(x: FiniteSpace, y: FiniteSpace, common: Sequence[tuple[int, int]],
            rename=None) -> tuple[FiniteSpace, list[int]]:
    """Glue ``x`` and ``y`` along the correspondence ``common`` of (x-index, y-index) pairs.

    Returns the amalgam and the position of every ``y`` point inside it; ``x``
    points keep their indices.  Points of ``y`` that are not identified are
    appended, renamed with ``rename(name)`` when their name is taken.
    """
    if x.mode != y.mode:
        raise ValueError("cannot amalgamate a metric space with an ultrametric space")
    if not common:
        raise ValueError("amalgamation needs a nonempty common part")
    mode = x.mode
    for i, (ax, ay) in enumerate(common):
        for bx, by in common[i + 1:]:
            if x.dist[ax][bx] != y.dist[ay][by]:
                raise ValidationError("metrics disagree on the common part",
                                      ((x.points[ax], x.points[bx]), (y.points[ay], y.points[by])))
    ys = {ay: ax for ax, ay in common}
    if len(ys) != len(common) or len({ax for ax, _ in common}) != len(common):
        raise ValueError("common correspondence must be injective")

    names = list(x.points)
    taken = set(names)
    position = []
    for j, name in enumerate(y.points):
        if j in ys:
            position.append(ys[j])
            continue
        new = name
        while new in taken:
            new = rename(new) if rename else new + "'"
        taken.add(new)
        position.append(len(names))
        names.append(new)

    n = len(names)
    table = [[ZERO] * n for _ in range(n)]
    for p in range(len(x)):
        for q in range(len(x)):
            table[p][q] = x.dist[p][q]
    for p in range(len(y)):
        for q in range(len(y)):
            table[position[p]][position[q]] = y.dist[p][q]
    y_only = [j for j in range(len(y)) if j not in ys]
    for p in range(len(x)):
        to_x = [x.dist[p][ax] for ax, _ in common]
        for j in y_only:
            to_y = [y.dist[ay][j] for _, ay in common]
            v = amalgam_distance(mode, to_x, to_y)
            table[p][position[j]] = v
            table[position[j]][p] = v
    return FiniteSpace(tuple(names), tuple(tuple(r) for r in table), mode), position


def inverse_name(name: str) -> str:
    return name[:-3] if name.endswith("^-1") else name + "^-1"


def add_formal_inverses(p: FiniteSpace) -> FiniteSpace:
    """Amalgamate ``X`` with a copy ``X^-1`` over ``{e}``; ``x^-1`` gets name ``x + "^-1"``."""
    e = p.e
    report = validate_space(FiniteSpace(p.points, p.dist, p.mode))
    report.raise_if_invalid()
    copy = FiniteSpace(tuple(inverse_name(n) if i != e else n for i, n in enumerate(p.points)),
                       p.dist, p.mode)
    glued, pos = amalgam(FiniteSpace(p.points, p.dist, p.mode), copy, [(e, e)])
    inv = [0] * len(glued)
    for i in range(len(p)):
        inv[i] = pos[i]
        inv[pos[i]] = i
    return FiniteSpace(glued.points, glued.dist, p.mode, e, tuple(inv))
