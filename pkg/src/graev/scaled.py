"""Scaled spaces, the match-norm recursion, scaled Graev norms, unions and the retract."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .free import Match, Word, reduce_word
from .report import BoundError, ValidationReport
from .scales import identity_scale, validate_scale
from .spaces import FiniteSpace, amalgam, combine, validate_space


@dataclass(frozen=True)
class CompositeScale:
    """A scale assembled pointwise from other scales: ``Gamma(z, r) = parts[k](i, r)`` for ``owner[z] = (k, i)``."""

    parts: tuple
    owner: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.owner)

    def __call__(self, z: int, r: Fraction) -> Fraction:
        k, i = self.owner[z]
        return self.parts[k](i, r)

    @property
    def is_identity(self) -> bool:
        return all(p.is_identity for p in self.parts)

    def probes(self) -> list[Fraction]:
        out: set[Fraction] = set()
        for p in self.parts:
            out.update(p.probes())
        return sorted(out)


@dataclass(frozen=True)
class ScaledSpace:
    space: FiniteSpace
    scale: object

    def gamma(self, x: int, r: Fraction) -> Fraction:
        return self.scale(x, r)

    def validate(self) -> ValidationReport:
        rep = validate_space(self.space)
        if not self.space.is_symmetric:
            rep.add("formal-inverses", None)
        if len(self.scale) != len(self.space):
            rep.add("scale-carrier", (len(self.scale), len(self.space)))
        else:
            rep.extend(validate_scale(self.scale, self.space.e, self.space.values()))
        return rep


def plain(space: FiniteSpace) -> ScaledSpace:
    return ScaledSpace(space, identity_scale(len(space)))


def scaled_match_norm(w: Word, theta: Match, ss: ScaledSpace, mode: str | None = None) -> Fraction:
    """The three-case recursion for ``||w||_theta``."""
    if len(w) != len(theta):
        raise ValueError("word and match lengths differ")
    space = ss.space
    mode = mode or space.mode
    dist, inv, e = space.dist, space.inv, space.e

    def go(i: int, j: int) -> Fraction:
        # positions i..j inclusive, theta restricted to them
        if i == j:
            return dist[w[i]][e]
        k = theta[i]
        if k == i:
            return combine(mode, dist[w[i]][e], go(i + 1, j))
        if k < j:
            return combine(mode, go(i, k), go(k + 1, j))
        if j == i + 1:
            return dist[w[i]][inv[w[j]]]
        inner = go(i + 1, j - 1)
        g = min(ss.gamma(inv[w[i]], inner), ss.gamma(w[j], inner))
        return combine(mode, dist[w[i]][inv[w[j]]], g)

    for i, k in enumerate(theta):
        if theta[k] != i:
            raise ValueError("theta is not an involution")
    return go(0, len(w) - 1)


def _pair_cost(w, i, k, inner, ss, mode):
    dist, inv = ss.space.dist, ss.space.inv
    if k == i + 1:
        return dist[w[i]][inv[w[k]]]
    g = min(ss.gamma(inv[w[i]], inner), ss.gamma(w[k], inner))
    return combine(mode, dist[w[i]][inv[w[k]]], g)


def scaled_word_norm(w: Word, ss: ScaledSpace, mode: str | None = None):
    """Minimum of ``||w||_theta`` over matches on one fixed word, with a minimising match.

    Minimising each sub-interval independently is sound because ``combine``
    and every ``Gamma(x, .)`` are monotone.
    """
    space = ss.space
    mode = mode or space.mode
    n = len(w)
    dist, e = space.dist, space.e
    best: dict = {}
    choice: dict = {}
    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length - 1
            top, arg = None, None
            for k in range(i + 1, j + 1):
                inner = best[(i + 1, k - 1)] if k > i + 1 else None
                pc = _pair_cost(w, i, k, inner, ss, mode)
                v = pc if k == j else combine(mode, pc, best[(k + 1, j)])
                if top is None or v < top:
                    top, arg = v, k
            v = dist[w[i]][e] if i == j else combine(mode, dist[w[i]][e], best[(i + 1, j)])
            if top is None or v < top:
                top, arg = v, i
            best[(i, j)] = top
            choice[(i, j)] = arg
    theta = list(range(n))
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if i > j:
            continue
        k = choice[(i, j)]
        theta[i], theta[k] = k, i
        if k == i:
            stack.append((i + 1, j))
        else:
            stack.append((i + 1, k - 1))
            stack.append((k + 1, j))
    return best[(0, n - 1)], tuple(theta)


@dataclass(frozen=True)
class ScaledNorm:
    value: Fraction
    word: Word
    match: Match
    bound: int
    exact: bool


def words_evaluating_to(f: Word, space: FiniteSpace, length: int):
    """Every word of exactly ``length`` letters whose free reduction is ``reduce(f)``."""
    target = reduce_word(f, space)
    letters = range(len(space))
    inv = space.inverse

    def gap(prefix_red: tuple) -> int:
        # reduced length of prefix^-1 * target
        k = 0
        while k < len(prefix_red) and k < len(target) and prefix_red[k] == target[k]:
            k += 1
        return (len(prefix_red) - k) + (len(target) - k)

    def push(red: tuple, x: int) -> tuple:
        if x == space.e:
            return red
        if red and red[-1] == inv(x):
            return red[:-1]
        return red + (x,)

    def go(prefix: list, red: tuple):
        left = length - len(prefix)
        if left == 0:
            if red == target:
                yield tuple(prefix)
            return
        for x in letters:
            r2 = push(red, x)
            if gap(r2) <= left - 1:
                prefix.append(x)
                yield from go(prefix, r2)
                prefix.pop()

    if length == 0:
        return
    yield from go([], ())


def graev_norm_scaled(f: Word, ss: ScaledSpace, mode: str | None = None,
                      length_bound: int | None = None) -> ScaledNorm:
    """Least ``||w||_theta`` over words ``w`` with ``w^ = f``, ``|w| <= length_bound``, and all matches.

    The defining infimum ranges over all lengths.  ``exact`` is set when the
    scale is the identity, where the reduced form alone already attains it.
    """
    space = ss.space
    red = reduce_word(f, space)
    if length_bound is None:
        length_bound = max(len(red), 1)
    if length_bound < len(red):
        raise BoundError(f"length bound {length_bound} is below the reduced length {len(red)}")
    best = None
    for length in range(max(len(red), 1), length_bound + 1):
        for w in words_evaluating_to(red, space, length):
            v, theta = scaled_word_norm(w, ss, mode)
            if best is None or v < best[0]:
                best = (v, w, theta)
    if best is None:
        # identity element with bound 0 cannot happen: length_bound >= 1 here
        raise BoundError("no word within the bound")
    return ScaledNorm(best[0], best[1], best[2], length_bound, ss.scale.is_identity)


def union_scaled(x: ScaledSpace, y: ScaledSpace) -> tuple[ScaledSpace, list[int]]:
    """Glue two scaled spaces over ``e``; returns the union and the positions of ``y`` points."""
    sx, sy = x.space, y.space
    glued, pos = amalgam(FiniteSpace(sx.points, sx.dist, sx.mode),
                         FiniteSpace(sy.points, sy.dist, sy.mode), [(sx.e, sy.e)])
    n = len(glued)
    inv = list(range(n))
    for i in range(len(sx)):
        inv[i] = sx.inv[i]
    for j in range(len(sy)):
        inv[pos[j]] = pos[sy.inv[j]]
    owner = [(0, i) for i in range(len(sx))] + [None] * (n - len(sx))
    for j in range(len(sy)):
        if pos[j] >= len(sx):
            owner[pos[j]] = (1, j)
    space = FiniteSpace(glued.points, glued.dist, glued.mode, sx.e, tuple(inv))
    return ScaledSpace(space, CompositeScale((x.scale, y.scale), tuple(owner))), pos


def retract(w: Word, union: ScaledSpace, keep: int) -> Word:
    """Send the letters outside the first ``keep`` points (the ``X`` side) to ``e``."""
    e = union.space.e
    return tuple(z if z < keep else e for z in w)


def scales_equal_on(a, b, points: Sequence[int], probes: Sequence[Fraction]) -> bool:
    return all(a(x, r) == b(x, r) for x in points for r in probes)

