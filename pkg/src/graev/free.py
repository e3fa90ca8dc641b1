"""Words over a symmetric space, matches, and the Graev norm on the free group.

A word is a tuple of point indices of a symmetric :class:`FiniteSpace`.  A
match is a tuple ``theta`` of the same length with ``theta[theta[i]] == i``
(0-based positions) whose arcs never cross.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .spaces import ULTRAMETRIC, FiniteSpace, combine

Word = tuple
Match = tuple


def parse_word(tokens: Sequence, space: FiniteSpace) -> Word:
    """Letters may be point names (``"x^-1"`` for formal inverses) or indices."""
    return tuple(space.index(t) if isinstance(t, str) else int(t) for t in tokens)


def word_names(w: Word, space: FiniteSpace) -> list[str]:
    return [space.points[i] for i in w]


def inverse_word(w: Word, space: FiniteSpace) -> Word:
    return tuple(space.inverse(x) for x in reversed(w))


def reduce_word(w: Word, space: FiniteSpace) -> Word:
    """Drop ``e`` letters and cancel adjacent ``x x^-1`` until stable (empty tuple = identity)."""
    e = space.e
    stack: list[int] = []
    for x in w:
        if x == e:
            continue
        if stack and stack[-1] == space.inverse(x):
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_match(theta: Sequence[int]) -> bool:
    n = len(theta)
    for i, j in enumerate(theta):
        if not 0 <= j < n or theta[j] != i:
            return False
    arcs = [(i, j) for i, j in enumerate(theta) if i < j]
    for a, b in arcs:
        for c, d in arcs:
            if a < c < b < d:
                return False
    return True


@lru_cache(maxsize=None)
def _matches(lo: int, hi: int) -> tuple:
    """All matches on positions lo..hi-1 as tuples of (i, partner) arcs."""
    if lo >= hi:
        return ((),)
    out = []
    for rest in _matches(lo + 1, hi):
        out.append(((lo, lo),) + rest)
    for k in range(lo + 1, hi):
        for inner in _matches(lo + 1, k):
            for outer in _matches(k + 1, hi):
                out.append(((lo, k),) + inner + outer)
    return tuple(out)


def enumerate_matches(n: int) -> Iterator[Match]:
    """Every non-crossing involution of ``0..n-1``, each once (Motzkin many)."""
    if n < 1:
        raise ValueError("matches need length >= 1")
    for arcs in _matches(0, n):
        theta = [0] * n
        for i, k in arcs:
            theta[i] = k
            theta[k] = i
        yield tuple(theta)


def motzkin(n: int) -> int:
    m = [1, 1]
    for k in range(2, n + 1):
        m.append(((2 * k + 1) * m[-1] + (3 * k - 3) * m[-2]) // (k + 2))
    return m[n]


def match_from_pairs(n: int, pairs: Sequence[tuple[int, int]], one_based: bool = True) -> Match:
    theta = list(range(n))
    off = 1 if one_based else 0
    for i, k in pairs:
        theta[i - off] = k - off
        theta[k - off] = i - off
    if not is_match(theta):
        raise ValueError("pairs do not form a non-crossing match")
    return tuple(theta)


def apply_match(w: Word, theta: Match, space: FiniteSpace) -> Word:
    """``w^theta``: keep openers, ``e`` at fixed points, inverse of the partner at closers."""
    if len(w) != len(theta):
        raise ValueError("word and match lengths differ")
    out = []
    for i, j in enumerate(theta):
        if j > i:
            out.append(w[i])
        elif j == i:
            out.append(space.e)
        else:
            out.append(space.inverse(w[j]))
    return tuple(out)


def rho(u1: Word, u2: Word, space: FiniteSpace, mode: str | None = None) -> Fraction:
    if len(u1) != len(u2):
        raise ValueError("rho needs words of equal length")
    mode = mode or space.mode
    vals = [space.dist[a][b] for a, b in zip(u1, u2)]
    if mode == ULTRAMETRIC:
        return max(vals, default=Fraction(0))
    return sum(vals, Fraction(0))


def match_cost(w: Word, theta: Match, space: FiniteSpace, mode: str | None = None) -> Fraction:
    return rho(w, apply_match(w, theta, space), space, mode)


def _norm_dp(w: Word, space: FiniteSpace, mode: str):
    """Interval DP; ``best[(i, j)]`` covers positions ``i..j-1``."""
    n = len(w)
    dist, inv, e = space.dist, space.inv, space.e
    zero = Fraction(0)
    best: dict[tuple[int, int], Fraction] = {}
    choice: dict[tuple[int, int], int] = {}
    for length in range(0, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            if length == 0:
                best[(i, j)] = zero
                continue
            wi_inv = inv[w[i]]
            top, arg = None, None
            # pair i with k first (smallest k wins ties), the fixed point last
            for k in range(i + 1, j):
                v = combine(mode, combine(mode, dist[w[k]][wi_inv], best[(i + 1, k)]), best[(k + 1, j)])
                if top is None or v < top:
                    top, arg = v, k
            v = combine(mode, dist[w[i]][e], best[(i + 1, j)])
            if top is None or v < top:
                top, arg = v, i
            best[(i, j)] = top
            choice[(i, j)] = arg
    return best, choice


def _rebuild_match(choice, n: int) -> Match:
    theta = list(range(n))
    stack = [(0, n)]
    while stack:
        i, j = stack.pop()
        if i >= j:
            continue
        k = choice[(i, j)]
        theta[i], theta[k] = k, i
        if k == i:
            stack.append((i + 1, j))
        else:
            stack.append((i + 1, k))
            stack.append((k + 1, j))
    return tuple(theta)


def graev_norm_free_witness(f: Word, space: FiniteSpace, mode: str | None = None):
    """Return ``(norm, reduced word, optimal match)``."""
    mode = mode or space.mode
    w = reduce_word(f, space)
    if not w:
        return Fraction(0), w, ()
    best, choice = _norm_dp(w, space, mode)
    return best[(0, len(w))], w, _rebuild_match(choice, len(w))


def graev_norm_free(f: Word, space: FiniteSpace, mode: str | None = None) -> Fraction:
    return graev_norm_free_witness(f, space, mode)[0]


def graev_dist_free(f1: Word, f2: Word, space: FiniteSpace, mode: str | None = None) -> Fraction:
    return graev_norm_free(inverse_word(f1, space) + tuple(f2), space, mode)


def distance_codes(space: FiniteSpace):
    """Integer codes of the distance table plus the sorted value list (ultrametric use)."""
    levels = space.values()
    pos = {v: i for i, v in enumerate(levels)}
    codes = np.array([[pos[v] for v in row] for row in space.dist], dtype=np.uint8)
    return codes, levels


def graev_norm_free_batch(words: np.ndarray, space: FiniteSpace) -> np.ndarray:
    """The same interval DP run on many reduced words of one length at once.

    ``words`` is an ``(N, n)`` integer array; returns integer codes into
    ``space.values()`` (ultrametric mode) or exact sums scaled by the common
    denominator (metric mode) -- see :func:`batch_levels`.
    """
    words = np.asarray(words)
    count, n = words.shape
    codes, scale = _batch_table(space)
    inv = np.asarray(space.inv)
    e = space.e
    ultra = space.mode == ULTRAMETRIC
    comb = np.maximum if ultra else np.add
    zero = np.zeros(count, dtype=codes.dtype)
    best = {}
    for length in range(0, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            if length == 0:
                best[(i, j)] = zero
                continue
            top = comb(codes[words[:, i], e], best[(i + 1, j)])
            wi_inv = inv[words[:, i]]
            for k in range(i + 1, j):
                v = comb(comb(codes[words[:, k], wi_inv], best[(i + 1, k)]), best[(k + 1, j)])
                top = np.minimum(top, v)
            best[(i, j)] = top
    return best[(0, n)]


def _batch_table(space: FiniteSpace):
    if space.mode == ULTRAMETRIC:
        return distance_codes(space)
    from .rationals import common_scale
    den = common_scale(v for row in space.dist for v in row)
    table = np.array([[int(v * den) for v in row] for row in space.dist], dtype=np.int64)
    return table, den


def batch_levels(space: FiniteSpace, values: np.ndarray) -> list[Fraction]:
    """Turn :func:`graev_norm_free_batch` output back into Fractions."""
    _, scale = _batch_table(space)
    if space.mode == ULTRAMETRIC:
        return [scale[int(v)] for v in values]
    return [Fraction(int(v), scale) for v in values]


def reduced_words(space: FiniteSpace, length: int) -> np.ndarray:
    """All reduced words of a given length, as an ``(N, length)`` array."""
    letters = [x for x in range(len(space)) if x != space.e]
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    rows = [[x] for x in letters]
    for _ in range(length - 1):
        rows = [r + [x] for r in rows for x in letters if x != space.inverse(r[-1])]
    return np.array(rows, dtype=np.int64)


def all_words(space: FiniteSpace, length: int) -> Iterator[Word]:
    return product(range(len(space)), repeat=length)
