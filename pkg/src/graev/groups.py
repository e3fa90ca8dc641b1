"""Finite groups stored as full multiplication tables.

Elements are integers ``0..order-1``.  Groups built from permutations list
their elements in lexicographic order of the image tuples, so the identity is
always element 0.  Permutation products apply the left factor first:
``(p * q)(i) = q(p(i))``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .report import ValidationError, ValidationReport


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse cycle notation such as ``"(1 2)(3 4)"`` or ``"(123)"`` into a 0-based image tuple.

    Points are 1-based in the notation.  Single-digit points may be written
    without separators; anything larger needs spaces or commas.
    """
    image = list(range(degree))
    text = text.strip()
    if text in ("", "()", "e", "id"):
        return tuple(image)
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles or re.sub(r"\([^()]*\)", "", text).strip():
        raise ValueError(f"cannot parse cycle notation {text!r}")
    for body in cycles:
        body = body.strip()
        if re.search(r"[\s,]", body):
            pts = [int(t) for t in re.split(r"[\s,]+", body) if t]
        else:
            pts = [int(ch) for ch in body]
        if len(set(pts)) != len(pts) or any(not 1 <= p <= degree for p in pts):
            raise ValueError(f"bad cycle ({body}) for degree {degree}")
        # cycles compose left to right as well
        cyc = [p - 1 for p in pts]
        step = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
        image = [step.get(v, v) for v in image]
    return tuple(image)


def cycle_string(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    sep = " " if len(perm) > 9 else ""
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        parts.append("(" + sep.join(str(p + 1) for p in cyc) + ")")
    return "".join(parts) or "e"


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    identity: int
    inverse: np.ndarray
    labels: tuple[str, ...]
    perms: tuple[tuple[int, ...], ...] | None = None
    _lookup: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, elems: Iterable[int]) -> int:
        acc = self.identity
        for x in elems:
            acc = int(self.table[acc, x])
        return acc

    def conj(self, g: int, h: int) -> int:
        """``g^-1 h g``."""
        return int(self.table[self.table[self.inverse[g], h], g])

    def index(self, label: str) -> int:
        if not self._lookup:
            self._lookup.update({lab: i for i, lab in enumerate(self.labels)})
            if self.perms is not None:
                self._lookup.update({p: i for i, p in enumerate(self.perms)})
        if label in self._lookup:
            return self._lookup[label]
        if self.perms is not None:
            key = parse_cycles(label, len(self.perms[0]))
            if key in self._lookup:
                return self._lookup[key]
        raise KeyError(f"no group element {label!r}")

    def element(self, ref) -> int:
        """Accept an element index, a label or (for permutation groups) cycle notation."""
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if not 0 <= ref < self.order:
                raise KeyError(f"element index {ref} out of range")
            return int(ref)
        return self.index(str(ref))

    @classmethod
    def from_permutations(cls, generators: Sequence, degree: int) -> "FiniteGroup":
        gens = [parse_cycles(g, degree) if isinstance(g, str) else tuple(g) for g in generators]
        ident = tuple(range(degree))
        seen = {ident}
        queue = deque([ident])
        while queue:
            p = queue.popleft()
            for g in gens:
                q = tuple(g[p[i]] for i in range(degree))
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        perms = sorted(seen)
        pos = {p: i for i, p in enumerate(perms)}
        arr = np.array(perms, dtype=np.int64).reshape(len(perms), degree)
        n = len(perms)
        # lexicographic order of image tuples equals numeric order of these keys
        weights = degree ** np.arange(degree - 1, -1, -1, dtype=np.int64)
        keys = arr @ weights
        table = np.empty((n, n), dtype=np.int32)
        for a in range(n):
            composed = arr[:, arr[a]]          # composed[q] = p_a * q
            table[a, :] = np.searchsorted(keys, composed @ weights)
        inverse = np.empty(n, dtype=np.int32)
        for a, p in enumerate(perms):
            inv = [0] * degree
            for i, v in enumerate(p):
                inv[v] = i
            inverse[a] = pos[tuple(inv)]
        labels = tuple(cycle_string(p) for p in perms)
        return cls(table, pos[ident], inverse, labels, tuple(perms))

    @classmethod
    def from_table(cls, table, labels: Sequence[str] | None = None) -> "FiniteGroup":
        t = np.asarray(table, dtype=np.int32)
        n = t.shape[0]
        if t.shape != (n, n) or t.min(initial=0) < 0 or t.max(initial=0) >= n:
            raise ValidationError("multiplication table must be square with entries in range", None)
        idents = [i for i in range(n) if np.array_equal(t[i], np.arange(n)) and np.array_equal(t[:, i], np.arange(n))]
        if not idents:
            raise ValidationError("no identity element", None)
        e = idents[0]
        inverse = np.full(n, -1, dtype=np.int32)
        for a in range(n):
            hits = np.nonzero(t[a] == e)[0]
            if len(hits) != 1 or t[hits[0], a] != e:
                raise ValidationError("element has no two-sided inverse", a)
            inverse[a] = hits[0]
        # associativity: (ab)c == a(bc) for all triples, vectorised per a
        for a in range(n):
            left = t[t[a]]          # left[b, c] = (ab)c
            right = t[a][t]         # right[b, c] = a(bc)
            bad = np.argwhere(left != right)
            if len(bad):
                b, c = bad[0]
                raise ValidationError("multiplication is not associative", (a, int(b), int(c)))
        labs = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        return cls(t, e, inverse, labs)

    def generated(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted element list of the subgroup generated by ``gens``."""
        members = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(members))

    def generating_set(self) -> list[int]:
        gens: list[int] = []
        current = {self.identity}
        for x in range(self.order):
            if x not in current:
                gens.append(x)
                current = set(self.generated(gens))
        return gens

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = sorted(set(subset))
        if not s or self.identity not in s:
            return False
        idx = np.array(s)
        prods = self.table[np.ix_(idx, self.inverse[idx])]
        return bool(np.isin(prods, idx).all())

    def is_normal(self, subset: Iterable[int]) -> bool:
        s = np.array(sorted(set(subset)))
        for g in self.generating_set() or [self.identity]:
            conj = self.table[self.table[self.inverse[g], s], g]
            if not np.isin(conj, s).all():
                return False
        return True

    def right_coset_reps(self, sub: Sequence[int]) -> np.ndarray:
        """``rep[g]`` is the smallest element of the right coset ``A g``."""
        s = np.array(sorted(set(sub)))
        cosets = self.table[s][:, :]  # cosets[i, g] = s_i * g
        return cosets.min(axis=0).astype(np.int32)

    def left_coset_reps(self, sub: Sequence[int]) -> np.ndarray:
        s = np.array(sorted(set(sub)))
        return self.table[:, s].min(axis=1).astype(np.int32)


def symmetric_group(degree: int) -> FiniteGroup:
    if degree == 1:
        return FiniteGroup.from_permutations([], 1)
    gens = [tuple([1, 0] + list(range(2, degree))), tuple(list(range(1, degree)) + [0])]
    return FiniteGroup.from_permutations(gens, degree)


def alternating_subgroup(g: FiniteGroup) -> tuple[int, ...]:
    """Even permutations of a permutation group."""
    if g.perms is None:
        raise ValueError("parity needs a permutation group")
    out = []
    for i, p in enumerate(g.perms):
        seen, parity = set(), 0
        for s in range(len(p)):
            if s in seen:
                continue
            length = 0
            j = s
            while j not in seen:
                seen.add(j)
                j = p[j]
                length += 1
            parity ^= (length - 1) & 1
        if parity == 0:
            out.append(i)
    return tuple(out)


def check_homomorphism(src: FiniteGroup, dst: FiniteGroup, images: Sequence[int]) -> ValidationReport:
    report = ValidationReport("homomorphism")
    img = np.asarray(images)
    lhs = img[src.table]
    rhs = dst.table[img[:, None], img[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b = bad[0]
        report.add("homomorphism", (src.labels[a], src.labels[b]))
    if len(set(img.tolist())) != src.order:
        report.add("injective", None)
    return report
