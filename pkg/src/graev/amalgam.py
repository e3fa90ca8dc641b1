"""Amalgamated free products of finitely many groups over a common subgroup.

Factors are finite groups with an invariant ultrametric (:class:`TableFactor`)
or the infinite cyclic group with the ``K``-discrete ultrametric
(:class:`CyclicFactor`, only over a trivial common subgroup).  The common
subgroup ``A`` is an abstract :class:`FiniteGroup` with one embedding per
factor.

A letter is ``(side, elem)``.  Letters lying in ``A`` are always stored on
side 0, so a letter has one canonical spelling.  Elements of the product are
kept in the normal form ``a * r_1 * ... * r_k`` where ``a`` is in ``A`` and the
``r_i`` are non-trivial right-coset representatives (smallest element of the
coset ``A x``) from alternating factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Iterator, Sequence

import numpy as np

from .groups import FiniteGroup, check_homomorphism
from .metrics import InvariantUltrametric
from .report import ValidationError, ValidationReport
from .spaces import ULTRAMETRIC, FiniteSpace, amalgam, combine

Letter = tuple  # (side, elem)


class TableFactor:
    def __init__(self, metric: InvariantUltrametric, embedding: Sequence[int], name: str):
        self.metric = metric
        self.group = metric.group
        self.name = name
        self.embedding = tuple(int(v) for v in embedding)
        self.identity = self.group.identity
        self._pre = {x: a for a, x in enumerate(self.embedding)}
        self.reps = self.group.right_coset_reps(self.embedding)

    finite = True

    def mul(self, x: int, y: int) -> int:
        return self.group.mul(x, y)

    def inv(self, x: int) -> int:
        return self.group.inv(x)

    def in_a(self, x: int):
        return self._pre.get(x)

    def from_a(self, a: int) -> int:
        return self.embedding[a]

    def split(self, x: int) -> tuple[int, int]:
        """``x = from_a(a) * r`` with ``r`` the coset representative."""
        r = int(self.reps[x])
        a = self._pre[self.group.mul(x, self.group.inv(r))]
        return a, r

    def d(self, x: int, y: int) -> Fraction:
        return self.metric.d(x, y)

    def elements(self, cap: int = 0) -> range:
        return range(self.group.order)

    def label(self, x: int) -> str:
        return self.group.labels[x]

    def parse(self, ref) -> int:
        return self.group.element(ref)


class CyclicFactor:
    """``<u>`` written additively by exponent, with ``d(u^m, u^n) = K`` for ``m != n``."""

    finite = False
    identity = 0

    def __init__(self, k, name: str = "u", metric_mode: str = ULTRAMETRIC):
        self.k = Fraction(k)
        self.name = name
        self.metric_mode = metric_mode
        self.embedding = (0,)

    def mul(self, x: int, y: int) -> int:
        return x + y

    def inv(self, x: int) -> int:
        return -x

    def in_a(self, x: int):
        return 0 if x == 0 else None

    def from_a(self, a: int) -> int:
        return 0

    def split(self, x: int) -> tuple[int, int]:
        return 0, x

    def d(self, x: int, y: int) -> Fraction:
        if self.metric_mode == ULTRAMETRIC:
            return self.k if x != y else Fraction(0)
        return self.k * abs(x - y)

    def elements(self, cap: int = 0) -> range:
        return range(-cap, cap + 1)

    def label(self, x: int) -> str:
        if x == 0:
            return "e"
        return self.name if x == 1 else f"{self.name}^{x}"

    def parse(self, ref) -> int:
        if isinstance(ref, int):
            return ref
        s = str(ref).strip()
        if s == "e":
            return 0
        if s == self.name:
            return 1
        if s.startswith(self.name + "^"):
            return int(s[len(self.name) + 1:])
        raise KeyError(f"cannot read {ref!r} as a power of {self.name}")


@dataclass(frozen=True)
class ProductElem:
    head: int
    tail: tuple[Letter, ...]
    owner: object = field(default=None, compare=False, hash=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.tail)

    def __mul__(self, other: "ProductElem") -> "ProductElem":
        return self.owner.multiply(self, other)

    def inverse(self) -> "ProductElem":
        return self.owner.inverse(self)

    def is_identity(self) -> bool:
        return not self.tail and self.head == self.owner.a_group.identity


class AmalgamSetup:
    """Free product of ``factors`` amalgamated over the abstract group ``a_group``."""

    def __init__(self, factors: Sequence, a_group: FiniteGroup, names: Sequence[str] | None = None):
        self.factors = list(factors)
        self.a_group = a_group
        self.names = list(names) if names else [f.name for f in self.factors]
        self._dist_cache: dict = {}
        self._reach_cache: dict = {}
        self.one = ProductElem(a_group.identity, (), self)

    # -- letters -----------------------------------------------------------
    def letter(self, side: int, elem: int) -> Letter:
        a = self.factors[side].in_a(elem)
        if a is not None:
            return (0, self.factors[0].from_a(a))
        return (side, elem)

    def a_letter(self, a: int) -> Letter:
        return (0, self.factors[0].from_a(a))

    def one_letter(self) -> Letter:
        return self.a_letter(self.a_group.identity)

    def letter_in_a(self, x: Letter):
        return self.factors[x[0]].in_a(x[1])

    def letter_inv(self, x: Letter) -> Letter:
        return self.letter(x[0], self.factors[x[0]].inv(x[1]))

    def multipliable(self, x: Letter, y: Letter) -> bool:
        return x[0] == y[0] or self.letter_in_a(x) is not None or self.letter_in_a(y) is not None

    def letter_mul(self, x: Letter, y: Letter) -> Letter:
        """Product of two multipliable letters as one letter."""
        if self.letter_in_a(x) is not None and self.letter_in_a(y) is None:
            side = y[0]
            xe = self.factors[side].from_a(self.letter_in_a(x))
            return self.letter(side, self.factors[side].mul(xe, y[1]))
        if self.letter_in_a(y) is not None and self.letter_in_a(x) is None:
            side = x[0]
            ye = self.factors[side].from_a(self.letter_in_a(y))
            return self.letter(side, self.factors[side].mul(x[1], ye))
        if x[0] != y[0]:
            raise ValueError("letters are not multipliable")
        return self.letter(x[0], self.factors[x[0]].mul(x[1], y[1]))

    def letter_label(self, x: Letter) -> str:
        return f"{self.names[x[0]]}:{self.factors[x[0]].label(x[1])}"

    def letters(self, cap: int = 0) -> list[Letter]:
        """Every letter; infinite factors contribute exponents up to ``cap``."""
        out = []
        seen = set()
        for side, fac in enumerate(self.factors):
            for x in fac.elements(cap):
                lt = self.letter(side, x)
                if lt not in seen:
                    seen.add(lt)
                    out.append(lt)
        return out

    # -- normal forms ------------------------------------------------------
    def _push_left(self, head: int, reps: list, idx: int, a: int) -> int:
        """Move ``a`` (in A) from after ``reps[idx]`` to the head."""
        ag = self.a_group
        for i in range(idx, -1, -1):
            if a == ag.identity:
                return head
            side, r = reps[i]
            fac = self.factors[side]
            a, r2 = fac.split(fac.mul(r, fac.from_a(a)))
            reps[i] = (side, r2)
        return ag.mul(head, a)

    def _append(self, head: int, reps: list, x: Letter) -> int:
        side, elem = x
        fac = self.factors[side]
        a_of = fac.in_a(elem)
        if a_of is not None:
            return self._push_left(head, reps, len(reps) - 1, a_of) if reps else self.a_group.mul(head, a_of)
        if reps and reps[-1][0] == side:
            y = fac.mul(reps[-1][1], elem)
            a, r = fac.split(y)
            if r == fac.identity:
                reps.pop()
            else:
                reps[-1] = (side, r)
            if reps and r == fac.identity:
                return self._push_left(head, reps, len(reps) - 1, a)
            if r == fac.identity:
                return self.a_group.mul(head, a)
            return self._push_left(head, reps, len(reps) - 2, a) if len(reps) > 1 else self.a_group.mul(head, a)
        a, r = fac.split(elem)
        reps.append((side, r))
        return self._push_left(head, reps, len(reps) - 2, a) if len(reps) > 1 else self.a_group.mul(head, a)

    def evaluate(self, word: Iterable[Letter], start: ProductElem | None = None) -> ProductElem:
        head = start.head if start is not None else self.a_group.identity
        reps = list(start.tail) if start is not None else []
        for x in word:
            head = self._append(head, reps, x)
        return ProductElem(head, tuple(reps), self)

    def append(self, p: ProductElem, x: Letter) -> ProductElem:
        reps = list(p.tail)
        head = self._append(p.head, reps, x)
        return ProductElem(head, tuple(reps), self)

    def as_word(self, p: ProductElem) -> list[Letter]:
        word = [self.a_letter(p.head)] if p.head != self.a_group.identity or not p.tail else []
        return word + list(p.tail)

    def multiply(self, x: ProductElem, y: ProductElem) -> ProductElem:
        if x.owner is not None and x.owner is not self or y.owner is not None and y.owner is not self:
            raise ValueError("elements belong to different setups")
        return self.evaluate(self.as_word(y), start=x)

    def inverse(self, x: ProductElem) -> ProductElem:
        return self.evaluate(self.letter_inv(lt) for lt in reversed(self.as_word(x)))

    def is_trivial(self, word: Iterable[Letter]) -> bool:
        return self.evaluate(word) == self.one

    def in_a(self, p: ProductElem) -> bool:
        return not p.tail

    def element(self, side: int, elem: int) -> ProductElem:
        return self.evaluate([self.letter(side, elem)])

    # -- reduced forms -----------------------------------------------------
    def base_reduced_form(self, f: ProductElem) -> list[Letter]:
        if not f.tail:
            return [self.a_letter(f.head)]
        first_side, r1 = f.tail[0]
        fac = self.factors[first_side]
        lead = self.letter(first_side, fac.mul(fac.from_a(f.head), r1))
        return [lead] + list(f.tail[1:])

    def reduced_length(self, f: ProductElem) -> int:
        return max(len(f.tail), 1)

    def twist(self, alpha0: Sequence[Letter], params: Sequence[int]) -> list[Letter]:
        """``alpha(i) = c_{i-1}^-1 alpha0(i) c_i`` with ``c_0 = c_l = e``."""
        ag = self.a_group
        cs = [ag.identity] + list(params) + [ag.identity]
        out = []
        for i, (side, x) in enumerate(alpha0):
            fac = self.factors[side]
            y = fac.mul(fac.mul(fac.from_a(ag.inv(cs[i])), x), fac.from_a(cs[i + 1]))
            out.append(self.letter(side, y))
        return out

    def reduced_forms(self, f: ProductElem) -> Iterator[list[Letter]]:
        """All shortest words evaluating to ``f`` (``|A|^(l-1)`` of them)."""
        alpha0 = self.base_reduced_form(f)
        for params in cartesian(range(self.a_group.order), repeat=len(alpha0) - 1):
            yield self.twist(alpha0, params)

    # -- letter metric -----------------------------------------------------
    def dist(self, x: Letter, y: Letter) -> Fraction:
        key = (x, y) if x <= y else (y, x)
        hit = self._dist_cache.get(key)
        if hit is not None:
            return hit
        if x[0] == y[0]:
            v = self.factors[x[0]].d(x[1], y[1])
        else:
            fx, fy = self.factors[x[0]], self.factors[y[0]]
            v = min(combine(ULTRAMETRIC, fx.d(x[1], fx.from_a(a)), fy.d(fy.from_a(a), y[1]))
                    for a in range(self.a_group.order))
        self._dist_cache[key] = v
        return v

    def norm_of_letter(self, x: Letter) -> Fraction:
        return self.factors[x[0]].d(x[1], self.factors[x[0]].identity)

    def rho(self, u1: Sequence[Letter], u2: Sequence[Letter]) -> Fraction:
        if len(u1) != len(u2):
            raise ValueError("rho needs words of equal length")
        return max((self.dist(a, b) for a, b in zip(u1, u2)), default=Fraction(0))

    def union_space(self) -> FiniteSpace:
        """The amalgam metric space of all factors over A (finite factors only)."""
        if not all(f.finite for f in self.factors):
            raise ValueError("the union space needs finite factors")
        space = None
        for side, fac in enumerate(self.factors):
            sp = FiniteSpace(tuple(f"{self.names[side]}:{lab}" for lab in fac.group.labels),
                             tuple(tuple(row) for row in fac.metric.table()), ULTRAMETRIC)
            if space is None:
                space, ids = sp, [(0, x) for x in range(fac.group.order)]
                continue
            common = [(ids.index(self.a_letter(a)), fac.from_a(a)) for a in range(self.a_group.order)]
            space, pos = amalgam(space, sp, common)
            for x, p in enumerate(pos):
                if p >= len(ids):
                    ids.append((side, x))
        return space

    def union_letters(self) -> list[Letter]:
        out = [(0, x) for x in range(self.factors[0].group.order)]
        for side in range(1, len(self.factors)):
            for x in range(self.factors[side].group.order):
                lt = self.letter(side, x)
                if lt[0] == side:
                    out.append(lt)
        return out

    # -- reachable sets ----------------------------------------------------
    def reachable(self, length: int, cap: int = 0) -> frozenset:
        """Elements expressible as words of at most ``length`` letters (memoised)."""
        key = (length, cap)
        if key not in self._reach_cache:
            if length == 0:
                out = frozenset([self.one])
            else:
                prev = self.reachable(length - 1, cap)
                out = set(prev)
                for p in prev:
                    for x in self.letters(cap):
                        out.add(self.append(p, x))
                out = frozenset(out)
            self._reach_cache[key] = out
        return self._reach_cache[key]

    def elements_up_to(self, length: int) -> list[ProductElem]:
        """Normal forms with at most ``length`` coset letters, in a fixed order."""
        out = []
        ag = self.a_group
        finite = [i for i, f in enumerate(self.factors)]

        def tails(k, last):
            if k == 0:
                yield ()
                return
            for side in finite:
                if side == last:
                    continue
                fac = self.factors[side]
                reps = sorted({int(r) for r in fac.reps if int(r) != fac.identity})
                for r in reps:
                    for rest in tails(k - 1, side):
                        yield ((side, r),) + rest

        for k in range(0, length + 1):
            for tail in tails(k, None):
                for a in range(ag.order):
                    out.append(ProductElem(a, tail, self))
        return out

    def label(self, p: ProductElem) -> str:
        return " ".join(self.letter_label(x) for x in self.as_word(p))


def build_setup(g: InvariantUltrametric, h: InvariantUltrametric, a_group: FiniteGroup,
                emb_g: Sequence[int], emb_h: Sequence[int], names=("G", "H")) -> AmalgamSetup:
    return build_multi_setup([g, h], a_group, [emb_g, emb_h], names)


def check_setup(metrics: Sequence[InvariantUltrametric], a_group: FiniteGroup,
                embeddings: Sequence[Sequence[int]]) -> ValidationReport:
    report = ValidationReport("amalgam setup")
    for i, (m, emb) in enumerate(zip(metrics, embeddings)):
        if len(emb) != a_group.order:
            report.add("embedding-size", i)
            continue
        hom = check_homomorphism(a_group, m.group, emb)
        for v in hom:
            report.add(f"embedding-{v.rule}", (i, v.witness))
    if not report.ok:
        return report
    base, emb0 = metrics[0], embeddings[0]
    for i in range(1, len(metrics)):
        m, emb = metrics[i], embeddings[i]
        for a in range(a_group.order):
            for b in range(a_group.order):
                if base.d(emb0[a], emb0[b]) != m.d(emb[a], emb[b]):
                    report.add("metrics-agree-on-A", (a_group.labels[a], a_group.labels[b], i),
                               f"{base.d(emb0[a], emb0[b])} != {m.d(emb[a], emb[b])}")
    return report


def build_multi_setup(metrics: Sequence[InvariantUltrametric], a_group: FiniteGroup,
                      embeddings: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> AmalgamSetup:
    rep = check_setup(metrics, a_group, embeddings)
    if not rep.ok:
        raise ValidationError(f"invalid amalgam setup: {rep}", rep.violations[0].witness)
    names = list(names) if names else [chr(ord("G") + i) for i in range(len(metrics))]
    factors = [TableFactor(m, emb, n) for m, emb, n in zip(metrics, embeddings, names)]
    return AmalgamSetup(factors, a_group, names)


def trivial_group() -> FiniteGroup:
    return FiniteGroup.from_table(np.zeros((1, 1), dtype=np.int32), ["e"])


def subgroup_as_group(g: FiniteGroup, elems: Sequence[int]) -> tuple[FiniteGroup, list[int]]:
    """An abstract copy of a subgroup, with its inclusion map."""
    elems = sorted(elems)
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[g.mul(x, y)] for y in elems] for x in elems]
    return FiniteGroup.from_table(table, [g.labels[x] for x in elems]), elems


@lru_cache(maxsize=None)
def _words(n_letters: int, length: int):
    return list(cartesian(range(n_letters), repeat=length))
