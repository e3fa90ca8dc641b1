"""HNN extensions of a metric group, built inside ``(G * <u>) *_C (G * <v>)``.

``C`` is the subgroup ``G * uAu^-1`` of ``G * <u>``, identified with
``G * vBv^-1`` through ``g -> g`` and ``u a u^-1 -> v phi(a) v^-1``.  The
stable letter is ``t = v^-1 u``.  The infinite cyclic factors carry the
``K``-discrete ultrametric ``d(u^m, u^n) = K`` for ``m != n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .amalgam import AmalgamSetup, CyclicFactor, ProductElem, TableFactor, subgroup_as_group, trivial_group
from .forest import build_maximal_forest
from .fpairs import FPair, is_multipliable_pair, rho
from .metrics import InvariantUltrametric
from .product import default_cap, feasible, product_norm_dp
from .report import ValidationError, ValidationReport
from .spaces import ULTRAMETRIC, FiniteSpace

U_SIDE = 1


@dataclass
class HnnSetup:
    base: InvariantUltrametric
    a: tuple
    b: tuple
    phi: dict
    k: Fraction
    with_u: AmalgamSetup
    with_v: AmalgamSetup

    @property
    def group(self):
        return self.base.group

    def g_elem(self, side_setup: AmalgamSetup, g: int) -> ProductElem:
        return side_setup.element(0, g)

    def conj_u(self, a: int) -> ProductElem:
        """``u a u^-1`` in ``G * <u>``."""
        s = self.with_u
        return s.evaluate([s.letter(U_SIDE, 1), s.letter(0, a), s.letter(U_SIDE, -1)])

    def to_v(self, f: ProductElem) -> ProductElem:
        """The identification ``C -> G * vBv^-1`` applied to an element of ``C``."""
        word = self.with_u.as_word(f)
        out = []
        i = 0
        while i < len(word):
            side, x = word[i]
            if side == U_SIDE:
                a = word[i + 1][1]
                out += [(U_SIDE, 1), self.with_v.letter(0, self.phi[a]), (U_SIDE, -1)]
                i += 3
            else:
                out.append(self.with_v.letter(0, x))
                i += 1
        return self.with_v.evaluate(out)

    def norm_u(self, f: ProductElem, cap: int | None = None) -> Fraction:
        return product_norm_dp(self.with_u, f, cap).value

    def norm_v(self, f: ProductElem, cap: int | None = None) -> Fraction:
        return product_norm_dp(self.with_v, f, cap).value


def free_product_with_cyclic(metric: InvariantUltrametric, k, name: str = "u") -> AmalgamSetup:
    g = metric.group
    return AmalgamSetup([TableFactor(metric, [g.identity], "G"), CyclicFactor(k, name)],
                        trivial_group(), ["G", name])


def check_hnn(metric: InvariantUltrametric, a: Sequence[int], b: Sequence[int], phi: dict, k,
              check_diameter: bool = True) -> ValidationReport:
    g = metric.group
    report = ValidationReport("HNN data")
    for name, sub in (("A", a), ("B", b)):
        if not g.is_subgroup(sub):
            report.add("subgroup", name)
    if set(phi) != set(a) or sorted(phi.values()) != sorted(b):
        report.add("bijection", None, "phi must map A onto B one-to-one")
        return report
    for x in a:
        for y in a:
            if phi[g.mul(x, y)] != g.mul(phi[x], phi[y]):
                report.add("homomorphism", (g.labels[x], g.labels[y]))
            if metric.d(x, y) != metric.d(phi[x], phi[y]):
                report.add("isometric", (g.labels[x], g.labels[y]),
                           f"{metric.d(x, y)} != {metric.d(phi[x], phi[y])}")
    if Fraction(k) <= 0:
        report.add("positive-K", k)
    if check_diameter and metric.diameter(a) > Fraction(k):
        report.add("diameter", metric.diameter(a), f"diam(A) = {metric.diameter(a)} > K = {k}")
    return report


def build_hnn(metric: InvariantUltrametric, a: Sequence[int], b: Sequence[int], phi: dict, k,
              check_diameter: bool = True) -> HnnSetup:
    rep = check_hnn(metric, a, b, phi, k, check_diameter)
    if not rep.ok:
        raise ValidationError(f"invalid HNN data: {rep}", rep.violations[0].witness)
    k = Fraction(k)
    return HnnSetup(metric, tuple(sorted(a)), tuple(sorted(b)), dict(phi), k,
                    free_product_with_cyclic(metric, k, "u"), free_product_with_cyclic(metric, k, "v"))


def in_conjugated_subgroup(hnn: HnnSetup, f: ProductElem) -> bool:
    """Membership in ``G * uAu^-1``: u-letters come as ``u, a, u^-1`` blocks with ``a`` in ``A``."""
    word = hnn.with_u.as_word(f)
    i = 0
    aset = set(hnn.a)
    while i < len(word):
        side, x = word[i]
        if side == U_SIDE:
            if x != 1 or i + 2 >= len(word) or word[i + 2] != (U_SIDE, -1) or word[i + 1][1] not in aset:
                return False
            i += 3
        else:
            i += 1
    return True


@dataclass(frozen=True)
class StableNorm:
    value: Fraction
    lower_bound: Fraction
    witness: tuple


def conjugated_elements(hnn: HnnSetup, length: int) -> list[ProductElem]:
    """Products of at most ``length`` generators ``g`` and ``u a u^-1``."""
    s = hnn.with_u
    gens = [s.element(0, g) for g in range(hnn.group.order)]
    gens += [hnn.conj_u(a) for a in hnn.a if a != hnn.group.identity]
    layer = {s.one}
    seen = set(layer)
    for _ in range(length):
        nxt = set()
        for p in layer:
            for q in gens:
                r = s.multiply(p, q)
                if r not in seen:
                    seen.add(r)
                    nxt.add(r)
        layer = nxt
    return sorted(seen, key=lambda f: (len(f.tail), repr(f.tail), f.head))


def stable_letter_norm(hnn: HnnSetup, length: int = 1) -> StableNorm:
    """``||v^-1 u||`` from its reduced pairs ``(v^-1 c, c^-1 u)`` against ``(x, x^-1)``, with ``c, x`` in ``C``.

    ``c`` and ``x`` range over products of at most ``length`` generators.  The
    u-exponent sum of ``c^-1 u x`` is 1, so every such pair costs at least
    ``K``; the search therefore certifies the exact value once it finds ``K``.
    """
    su, sv = hnn.with_u, hnn.with_v
    elems = conjugated_elements(hnn, length)
    u = su.element(U_SIDE, 1)
    vinv = sv.element(U_SIDE, -1)
    best, arg = None, None
    for c in elems:
        for x in elems:
            left = sv.multiply(sv.inverse(sv.multiply(vinv, hnn.to_v(c))), hnn.to_v(x))
            right = su.multiply(su.inverse(su.multiply(su.inverse(c), u)), su.inverse(x))
            v = max(hnn.norm_v(left), hnn.norm_u(right))
            if best is None or v < best:
                best, arg = v, (c, x)
    return StableNorm(best, hnn.k, (su.label(arg[0]), su.label(arg[1])))


def restriction_violations(hnn: HnnSetup) -> list:
    """Elements ``g`` of ``G`` where the extended norm differs from ``d(g, e)``."""
    bad = []
    for g in range(hnn.group.order):
        v = hnn.norm_u(hnn.with_u.element(0, g))
        if v != hnn.base.norm(g):
            bad.append((hnn.group.labels[g], v, hnn.base.norm(g)))
    return bad


def check_subgroup_metric_agreement(hnn: HnnSetup, length_bound: int = 2, sample: Sequence | None = None):
    """Compare norms on ``G * A'`` (``A'`` a metric copy of ``A``) with norms of the images in ``G * <u>``.

    Returns ``(report, compared)``.  Each disagreement is a violation whose
    witness is the element and both values.
    """
    g = hnn.group
    a_group, incl = subgroup_as_group(g, hnn.a)
    a_metric = InvariantUltrametric.from_table(a_group, [[hnn.base.d(x, y) for y in incl] for x in incl])
    inner = AmalgamSetup([TableFactor(hnn.base, [g.identity], "G"), TableFactor(a_metric, [a_group.identity], "A'")],
                         trivial_group(), ["G", "A'"])
    su = hnn.with_u
    elems = list(sample) if sample is not None else inner.elements_up_to(length_bound)
    report = ValidationReport("subgroup metric agreement")
    for f in elems:
        image = []
        for side, x in inner.as_word(f):
            if side == 0:
                image.append(su.letter(0, x))
            else:
                image += [su.letter(U_SIDE, 1), su.letter(0, incl[x]), su.letter(U_SIDE, -1)]
        fu = su.evaluate(image)
        n_inner = product_norm_dp(inner, f).value
        n_outer = hnn.norm_u(fu)
        if n_inner != n_outer:
            report.add("agreement", inner.label(f), f"{n_inner} inside vs {n_outer} in G*<u>")
    return report, len(elems)


def u_window_space(k, radius: int, mode: str = ULTRAMETRIC) -> FiniteSpace:
    """``u^-radius .. u^radius`` with the K-discrete metric, or ``K |m - n|`` in metric mode."""
    k = Fraction(k)
    exps = list(range(-radius, radius + 1))
    names = tuple("e" if n == 0 else f"u^{n}" for n in exps)
    if mode == ULTRAMETRIC:
        table = [[Fraction(0) if m == n else k for n in exps] for m in exps]
    else:
        table = [[k * abs(m - n) for n in exps] for m in exps]
    return FiniteSpace.from_table(names, table, mode, basepoint=exps.index(0))


# -- hereditary and rigid pairs -------------------------------------------------

def _u_letter(x) -> bool:
    return x[0] == U_SIDE and x[1] != 0


def u_exponent_sum(word) -> int:
    return sum(x[1] for x in word if x[0] == U_SIDE)


def is_hereditary(p: FPair) -> bool:
    return all(z == a for a, z in zip(p.alpha, p.zeta) if _u_letter(z))


def make_hereditary(setup: AmalgamSetup, p: FPair) -> FPair:
    """Zero the u-letters of every remainder that holds a mismatched u-letter.

    A remainder on the u side has exponent sum 0 (the children evaluate to
    ``e`` because ``A`` is trivial), so zeroing all its u-letters keeps
    ``zeta`` trivial.  A mismatch already costs ``K`` and every new cost is
    ``d(u^m, e) <= K``, so ``rho`` cannot grow.
    """
    if not is_multipliable_pair(setup, p):
        raise ValidationError("make_hereditary needs a multipliable pair", None)
    forest = build_maximal_forest(setup, p.zeta)
    zeta = list(p.zeta)
    one = setup.one_letter()
    for t in range(len(forest)):
        rem = forest.remainder(t)
        if any(_u_letter(zeta[i - 1]) and zeta[i - 1] != p.alpha[i - 1] for i in rem):
            for i in rem:
                if _u_letter(zeta[i - 1]):
                    zeta[i - 1] = one
    return FPair(p.alpha, tuple(zeta), p.target)


def rigid_violations(setup: AmalgamSetup, p: FPair) -> list[str]:
    bad = []
    one = setup.one_letter()
    for i, x in enumerate(p.alpha):
        if x[0] == U_SIDE and abs(x[1]) == 1 and p.zeta[i] != x:
            bad.append(f"zeta({i}) differs from alpha({i}) = u^{x[1]}")
        if x == (U_SIDE, 1) and i + 1 < len(p.alpha) and p.zeta[i + 1] != one:
            bad.append(f"zeta({i + 1}) after u is not in A")
    return bad


def make_rigid(setup: AmalgamSetup, p: FPair, cap: int | None = None) -> FPair:
    """Least-``rho`` hereditary pair with ``zeta = alpha`` at ``u^{+-1}`` and ``e`` right after each ``u``.

    The u-exponent sum of ``alpha`` must be 0.  A rigid pair with ``rho``
    at most ``rho(p)`` always exists; failing to find one raises
    ``AssertionError``.
    """
    if len(p.alpha) != setup.reduced_length(p.target) or tuple(setup.base_reduced_form(p.target)) != p.alpha:
        raise ValidationError("make_rigid needs alpha in reduced form", None)
    if not is_hereditary(p) or not is_multipliable_pair(setup, p):
        raise ValidationError("make_rigid needs a multipliable hereditary pair", None)
    if u_exponent_sum(p.alpha) != 0:
        raise ValidationError("make_rigid needs u-exponent sum 0", u_exponent_sum(p.alpha))
    cap = default_cap(setup, p.alpha) if cap is None else cap
    g_letters = [setup.letter(0, x) for x in range(setup.factors[0].group.order)]
    one = setup.one_letter()
    alpha = p.alpha

    def choices(i, x):
        if i > 0 and alpha[i - 1] == (U_SIDE, 1):
            return [one]
        if x[0] == U_SIDE:
            return [x] if abs(x[1]) == 1 else [x, one]
        return g_letters

    limit = rho(setup, p)
    levels = sorted({setup.dist(x, z) for i, x in enumerate(alpha) for z in choices(i, x)})
    for r in levels:
        if r > limit:
            break
        q = feasible(setup, p.target, r, g_letters, choices)
        if q is not None:
            return q
    raise AssertionError("no rigid pair within rho of the input")


def remainder_sizes_of_u_nodes(setup: AmalgamSetup, p: FPair) -> list[int]:
    """``|R_t|`` for forest nodes whose remainder holds a u-letter of ``zeta``."""
    forest = build_maximal_forest(setup, p.zeta)
    out = []
    for t in range(len(forest)):
        rem = forest.remainder(t)
        if any(_u_letter(p.zeta[i - 1]) for i in rem):
            out.append(len(rem))
    return out
