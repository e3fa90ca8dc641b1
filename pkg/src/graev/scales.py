"""Scales: per-point monotone functions ``r -> Gamma(x, r)`` with ``Gamma(e, r) = r``.

Two exact representations are provided.

``StepScale`` stores thresholds ``0 = t_0 < t_1 < ... < t_k`` and per-point
values ``c_x(t_j)``; then ``Gamma(x, r) = max(r, c_x(t_j))`` for the largest
``t_j <= r``.  This is the shape of a canonical scale on a finite group.

``LinearScale`` is ``Gamma(x, r) = lambda_x * r`` with ``lambda_x >= 1``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rationals import parse_rational
from .report import ValidationReport


@dataclass(frozen=True)
class StepScale:
    thresholds: tuple[Fraction, ...]
    values: tuple[tuple[Fraction, ...], ...]

    def __len__(self):
        return len(self.values)

    def __call__(self, x: int, r: Fraction) -> Fraction:
        j = bisect_right(self.thresholds, r) - 1
        c = self.values[x][j] if j >= 0 else Fraction(0)
        return r if r >= c else c

    def step_values(self, x: int) -> tuple[Fraction, ...]:
        return self.values[x]

    @property
    def is_identity(self) -> bool:
        return all(c <= t for row in self.values for c, t in zip(row, self.thresholds))

    def probes(self) -> list[Fraction]:
        return list(self.thresholds)

    def permuted(self, order: Sequence[int]) -> "StepScale":
        return StepScale(self.thresholds, tuple(self.values[i] for i in order))


@dataclass(frozen=True)
class LinearScale:
    factors: tuple[Fraction, ...]

    def __len__(self):
        return len(self.factors)

    def __call__(self, x: int, r: Fraction) -> Fraction:
        return self.factors[x] * r

    @property
    def is_identity(self) -> bool:
        return all(f == 1 for f in self.factors)

    def probes(self) -> list[Fraction]:
        return [Fraction(0)]

    def permuted(self, order: Sequence[int]) -> "LinearScale":
        return LinearScale(tuple(self.factors[i] for i in order))


def identity_scale(n: int) -> LinearScale:
    return LinearScale((Fraction(1),) * n)


def linear_scale(factors) -> LinearScale:
    return LinearScale(tuple(parse_rational(f) for f in factors))


def step_scale(thresholds, values) -> StepScale:
    return StepScale(tuple(parse_rational(t) for t in thresholds),
                     tuple(tuple(parse_rational(v) for v in row) for row in values))


def validate_scale(scale, basepoint: int, extra_probes: Sequence[Fraction] = ()) -> ValidationReport:
    """Check the scale axioms at every threshold, between thresholds and beyond them.

    Step and linear scales are determined by finitely many numbers, so these
    probes decide the axioms exactly.
    """
    report = ValidationReport("scale")
    base = sorted(set(scale.probes()) | set(extra_probes) | {Fraction(0), Fraction(1)})
    probes = set(base)
    for a, b in zip(base, base[1:]):
        probes.add((a + b) / 2)
    probes.add(base[-1] * 2 + 1)
    probes = sorted(probes)
    if isinstance(scale, StepScale):
        if not scale.thresholds or scale.thresholds[0] != 0:
            report.add("threshold-at-zero", None)
        if list(scale.thresholds) != sorted(set(scale.thresholds)):
            report.add("thresholds-increasing", None)
        for x, row in enumerate(scale.values):
            if len(row) != len(scale.thresholds):
                report.add("row-length", x)
            if row and row[0] != 0:
                report.add("vanishes-at-zero", x, f"c(0) = {row[0]}")
    if isinstance(scale, LinearScale):
        for x, f in enumerate(scale.factors):
            if f < 1:
                report.add("dominates-identity", x, f"factor {f}")
    for x in range(len(scale)):
        prev = None
        for r in probes:
            v = scale(x, r)
            if x == basepoint and v != r:
                report.add("identity-at-basepoint", (x, r))
            if v < r:
                report.add("dominates-identity", (x, r))
            if (v == 0) != (r == 0):
                report.add("zero-iff-zero", (x, r))
            if prev is not None and v < prev:
                report.add("monotone", (x, r))
            prev = v
    return report
