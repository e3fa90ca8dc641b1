"""The Graev ultrametric on an amalgamated product, computed exactly.

``||f||`` is the least ``rho(alpha, zeta)`` over reduced f-pairs: ``alpha`` a
shortest word for ``f`` and ``zeta`` a trivial word of the same length.  Both
ranges are finite for finite factors, so the minimum is attained.  Two
independent searches are provided: a branch-and-bound enumeration
(:func:`product_norm`) and a threshold reachability search
(:func:`product_norm_dp`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .amalgam import AmalgamSetup, ProductElem
from .fpairs import FPair


@dataclass(frozen=True)
class ProductNorm:
    value: Fraction
    pair: FPair


def default_cap(setup: AmalgamSetup, alpha: Sequence) -> int:
    """Exponent bound for letters of infinite cyclic factors."""
    if all(f.finite for f in setup.factors):
        return 0
    total = sum(abs(x[1]) for x in alpha if not setup.factors[x[0]].finite)
    return total + len(alpha)


def _zeta_letters(setup, cap, alphabet):
    return list(alphabet) if alphabet is not None else setup.letters(cap)


def product_norm(setup: AmalgamSetup, f: ProductElem, cap: int | None = None,
                 alphabet: Sequence | None = None) -> ProductNorm:
    """Branch-and-bound over reduced forms of ``f`` and trivial words of the same length."""
    alpha0 = setup.base_reduced_form(f)
    n = len(alpha0)
    cap = default_cap(setup, alpha0) if cap is None else cap
    letters = _zeta_letters(setup, cap, alphabet)
    best = [None, None, None]

    def dfs(alpha, pos, prefix, prod, cur):
        left = n - pos
        if left == 0:
            if prod == setup.one and (best[0] is None or cur < best[0]):
                best[:] = [cur, tuple(alpha), tuple(prefix)]
            return
        x = alpha[pos]
        ranked = sorted(letters, key=lambda z: setup.dist(x, z))
        for z in ranked:
            v = max(cur, setup.dist(x, z))
            if best[0] is not None and v >= best[0]:
                break
            p2 = setup.append(prod, z)
            if len(p2.tail) > left - 1:
                continue
            if left == 1 and p2 != setup.one:
                continue
            prefix.append(z)
            dfs(alpha, pos + 1, prefix, p2, v)
            prefix.pop()

    for alpha in setup.reduced_forms(f):
        dfs(alpha, 0, [], setup.one, Fraction(0))
    return ProductNorm(best[0], FPair(best[1], best[2], f))


def _thresholds(setup, f, letters):
    alpha0 = setup.base_reduced_form(f)
    vals = {Fraction(0)}
    for alpha in setup.reduced_forms(f):
        for x in alpha:
            vals.update(setup.dist(x, z) for z in letters)
    return sorted(vals)


def feasible(setup: AmalgamSetup, f: ProductElem, r: Fraction, letters: Sequence,
             choices=None):
    """A reduced f-pair with ``rho <= r``, or ``None``.

    States after position ``i`` are ``(c_i, P)``: the twisting parameter of
    the reduced form and the partial product of ``zeta``.  ``choices(i, x)``
    may narrow the ``zeta`` letters allowed against ``alpha`` letter ``x``.
    """
    alpha0 = setup.base_reduced_form(f)
    n = len(alpha0)
    ag = setup.a_group
    params = range(ag.order) if n > 1 else []
    layer = {(ag.identity, setup.one): None}
    history = []
    for i in range(n):
        nxt = {}
        c_next = [ag.identity] if i == n - 1 else list(params)
        for (c, prod) in layer:
            for c2 in c_next:
                fac = setup.factors[alpha0[i][0]]
                side, x0 = alpha0[i]
                y = fac.mul(fac.mul(fac.from_a(ag.inv(c)), x0), fac.from_a(c2))
                x = setup.letter(side, y)
                pool = choices(i, x) if choices is not None else letters
                for z in pool:
                    if setup.dist(x, z) > r:
                        continue
                    p2 = setup.append(prod, z)
                    if len(p2.tail) > n - i - 1:
                        continue
                    if i == n - 1 and p2 != setup.one:
                        continue
                    key = (c2, p2)
                    if key not in nxt:
                        nxt[key] = ((c, prod), x, z)
        history.append(nxt)
        layer = nxt
        if not layer:
            return None
    end = (ag.identity, setup.one)
    if end not in layer:
        return None
    alpha, zeta, key = [], [], end
    for i in range(n - 1, -1, -1):
        prev, x, z = history[i][key]
        alpha.append(x)
        zeta.append(z)
        key = prev
    return FPair(tuple(reversed(alpha)), tuple(reversed(zeta)), f)


def product_norm_dp(setup: AmalgamSetup, f: ProductElem, cap: int | None = None,
                    alphabet: Sequence | None = None) -> ProductNorm:
    """Least threshold ``r`` among the instance's distance values that is feasible."""
    alpha0 = setup.base_reduced_form(f)
    cap = default_cap(setup, alpha0) if cap is None else cap
    letters = _zeta_letters(setup, cap, alphabet)
    for r in _thresholds(setup, f, letters):
        pair = feasible(setup, f, r, letters)
        if pair is not None:
            return ProductNorm(r, pair)
    raise AssertionError("no threshold is feasible")


class ProductMetric:
    """``delta`` on an amalgamated product with a norm cache."""

    def __init__(self, setup: AmalgamSetup, method: str = "dp", cap: int | None = None):
        self.setup = setup
        self.method = method
        self.cap = cap
        self._cache: dict = {}

    def norm(self, f: ProductElem) -> Fraction:
        hit = self._cache.get(f)
        if hit is None:
            fn = product_norm_dp if self.method == "dp" else product_norm
            hit = fn(self.setup, f, self.cap).value
            self._cache[f] = hit
        return hit

    def dist(self, f1: ProductElem, f2: ProductElem) -> Fraction:
        return self.norm(self.setup.multiply(self.setup.inverse(f1), f2))


def product_dist(setup: AmalgamSetup, f1: ProductElem, f2: ProductElem) -> Fraction:
    return product_norm_dp(setup, setup.multiply(setup.inverse(f1), f2)).value


def multiway_product_norm(setup: AmalgamSetup, f: ProductElem) -> Fraction:
    """Same minimisation; the setup may carry any finite number of factors."""
    return product_norm_dp(setup, f).value


def lower_bound(setup: AmalgamSetup, f: ProductElem) -> Fraction:
    """``min_i d(alpha0(i), A)`` for a reduced form; ``||f|| >= `` this when ``f`` is not in ``A``."""
    alpha0 = setup.base_reduced_form(f)
    return min(min(setup.dist(x, setup.a_letter(a)) for a in range(setup.a_group.order)) for x in alpha0)
