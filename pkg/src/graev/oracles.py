"""Brute-force references that share as little code as possible with the fast paths."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import product as cartesian
from typing import Sequence

import numpy as np

from .free import enumerate_matches, match_cost, reduce_word
from .spaces import FiniteSpace


def free_norm_by_matches(w, space: FiniteSpace) -> Fraction:
    """Minimum of ``rho(w, w^theta)`` over every match of the reduced word."""
    red = reduce_word(w, space)
    if not red:
        return Fraction(0)
    return min(match_cost(red, theta, space) for theta in enumerate_matches(len(red)))


def free_norm_batch_by_matches(words: np.ndarray, space: FiniteSpace) -> np.ndarray:
    """Ultrametric brute force over all matches for an ``(N, n)`` word array, as level codes."""
    from .free import distance_codes
    codes, _ = distance_codes(space)
    inv = np.asarray(space.inv)
    count, n = words.shape
    e = space.e
    fixed = codes[words, e]                       # cost if position i is a fixed point
    best = None
    pair_cache: dict = {}
    for theta in enumerate_matches(n):
        cost = np.zeros(count, dtype=codes.dtype)
        for i, j in enumerate(theta):
            if j == i:
                col = fixed[:, i]
            elif j > i:
                continue
            else:
                key = (j, i)
                col = pair_cache.get(key)
                if col is None:
                    # closer i gets inverse of opener j; opener costs 0
                    col = codes[words[:, i], inv[words[:, j]]]
                    pair_cache[key] = col
            np.maximum(cost, col, out=cost)
        best = cost if best is None else np.minimum(best, cost)
    return best


def word_values(setup, length: int, letters: Sequence) -> dict:
    """Group every word of the given length by its value."""
    out = defaultdict(list)
    for w in cartesian(range(len(letters)), repeat=length):
        out[setup.evaluate(letters[k] for k in w)].append(w)
    return out


def unrestricted_norms(setup, targets: Sequence, max_len: int, letters: Sequence | None = None) -> dict:
    """``min rho(alpha, zeta)`` over all f-pairs with ``|alpha| <= max_len``, no shape restriction."""
    letters = list(letters) if letters is not None else setup.letters()
    levels = sorted({setup.dist(x, y) for x in letters for y in letters})
    pos = {v: i for i, v in enumerate(levels)}
    codes = np.array([[pos[setup.dist(x, y)] for y in letters] for x in letters], dtype=np.int64)
    best: dict = {}
    wanted = set(targets)
    for length in range(1, max_len + 1):
        groups = word_values(setup, length, letters)
        triv = np.array(groups.get(setup.one, []), dtype=np.int64).reshape(-1, length)
        if not len(triv):
            continue
        for f in wanted:
            alphas = np.array(groups.get(f, []), dtype=np.int64).reshape(-1, length)
            if not len(alphas):
                continue
            cost = np.zeros((len(alphas), len(triv)), dtype=np.int64)
            for i in range(length):
                np.maximum(cost, codes[alphas[:, i][:, None], triv[:, i][None, :]], out=cost)
            v = levels[int(cost.min())]
            if f not in best or v < best[f]:
                best[f] = v
    return best


def shortest_length(setup, f, letters: Sequence | None = None, limit: int = 6) -> int:
    """Least word length reaching ``f`` by breadth-first search."""
    letters = list(letters) if letters is not None else setup.letters()
    frontier = {setup.one}
    seen = set(frontier)
    for length in range(1, limit + 1):
        nxt = set()
        for p in frontier:
            for x in letters:
                q = setup.append(p, x)
                if q == f:
                    return length
                if q not in seen:
                    seen.add(q)
                    nxt.add(q)
        frontier = nxt
    raise ValueError("not reached within the limit")

