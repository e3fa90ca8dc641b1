"""Lipschitz morphisms from scaled spaces into metric groups, and their extension to words."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .free import Word
from .metrics import InvariantUltrametric, canonical_scale
from .report import ValidationError, ValidationReport
from .scaled import ScaledSpace
from .scales import StepScale


@dataclass(frozen=True)
class Morphism:
    source: ScaledSpace
    target: InvariantUltrametric
    images: tuple[int, ...]
    target_scale: StepScale | None = None

    def scale_of_target(self) -> StepScale:
        return self.target_scale if self.target_scale is not None else canonical_scale(self.target)

    def __call__(self, x: int) -> int:
        return self.images[x]


def check_morphism(phi: Morphism) -> ValidationReport:
    """Check ``phi(e) = e``, ``phi(x^-1) = phi(x)^-1``, the distance bound and the scale bound.

    The target scale is a step function, so ``Gamma_G(phi(x), r) <= Gamma(x, r)``
    for every ``r`` reduces to one comparison per target threshold: the
    target's step value against the source scale at that threshold (the
    source is monotone, so its least value on the step is at the left end).
    """
    space, g, m = phi.source.space, phi.target.group, phi.target
    names = space.points
    report = ValidationReport("Lipschitz morphism")
    if len(phi.images) != len(space):
        report.add("domain", (len(phi.images), len(space)))
        return report
    if phi.images[space.e] != g.identity:
        report.add("basepoint", names[space.e])
    for x in range(len(space)):
        if phi.images[space.inverse(x)] != g.inv(phi.images[x]):
            report.add("inverses", names[x])
    for x in range(len(space)):
        for y in range(x + 1, len(space)):
            dg = m.d(phi.images[x], phi.images[y])
            if dg > space.dist[x][y]:
                report.add("distance", (names[x], names[y]), f"{dg} > {space.dist[x][y]}")
    gamma_g = phi.scale_of_target()
    for x in range(len(space)):
        steps = gamma_g.step_values(phi.images[x])
        for t, c in zip(gamma_g.thresholds, steps):
            if c > phi.source.gamma(x, t) and c > t:
                report.add("scale", (names[x], t), f"Gamma_G = {c} > {phi.source.gamma(x, t)}")
                break
    return report


def extend_morphism(phi: Morphism, f: Word, checked: bool = True) -> int:
    """Image of a word: the product of the letter images, left to right."""
    if checked:
        rep = check_morphism(phi)
        if not rep.ok:
            raise ValidationError(f"not a Lipschitz morphism: {rep}", rep.violations[0].witness)
    return phi.target.group.product(phi.images[x] for x in f)


def morphism_from_names(source: ScaledSpace, target: InvariantUltrametric,
                        mapping: dict, target_scale: StepScale | None = None) -> Morphism:
    """Build from ``{point name: element}`` for the ``X`` side; inverses follow."""
    space, g = source.space, target.group
    images = [None] * len(space)
    images[space.e] = g.identity
    for name, elem in mapping.items():
        x = space.index(name)
        images[x] = g.element(elem)
        images[space.inverse(x)] = g.inv(images[x])
    if any(v is None for v in images):
        missing = [space.points[i] for i, v in enumerate(images) if v is None]
        raise ValueError(f"no image for {missing}")
    return Morphism(source, target, tuple(images), target_scale)


def lipschitz_violations(phi: Morphism, words: Sequence[Word], norm) -> list[tuple[Word, Fraction, Fraction]]:
    """Words where ``||phi(f)||_G > ||f||`` under the given word norm."""
    bad = []
    for w in words:
        lhs = phi.target.norm(extend_morphism(phi, w, checked=False))
        rhs = norm(w)
        if lhs > rhs:
            bad.append((w, lhs, rhs))
    return bad
