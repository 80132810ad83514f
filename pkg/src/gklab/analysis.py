"""Classify finite growth data and turn it into a GK dimension estimate.

All tests are exact comparisons on integers.  The only inexact quantity is the
``log d_N / log N`` fallback reported for inconclusive sequences, which is
rounded to four decimals and stored as a rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .calculus import INF, DimValue, format_rational
from .growth import GrowthSequence

__all__ = [
    "InsufficientData",
    "GrowthClass",
    "GKEstimate",
    "DEFAULT_WINDOW",
    "DEFAULT_MAX_DEGREE",
    "DEFAULT_RATIO",
    "classify_growth",
    "estimate_gkdim",
]

DEFAULT_WINDOW = 3
DEFAULT_MAX_DEGREE = 6
DEFAULT_RATIO = Fraction(3, 2)


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class GrowthClass:
    kind: str  # "bounded" | "polynomial" | "exponential" | "inconclusive"
    degree: Optional[int] = None
    loglog_estimate: Optional[Fraction] = None

    @classmethod
    def bounded(cls):
        return cls("bounded")

    @classmethod
    def polynomial(cls, k: int):
        if k < 1:
            raise ValueError("polynomial degree must be >= 1")
        return cls("polynomial", k)

    @classmethod
    def exponential(cls):
        return cls("exponential")

    @classmethod
    def inconclusive(cls, est: Fraction):
        return cls("inconclusive", loglog_estimate=est)

    def __str__(self):
        if self.kind == "polynomial":
            return f"Polynomial({self.degree})"
        if self.kind == "inconclusive":
            return f"Inconclusive({format_rational(self.loglog_estimate)})"
        return self.kind.capitalize()


@dataclass(frozen=True)
class GKEstimate:
    growth_class: GrowthClass
    dim: DimValue
    exact: bool
    window_used: int
    suspect_gap: bool

    def to_json(self) -> dict:
        out = {"class": self.growth_class.kind}
        if self.growth_class.degree is not None:
            out["degree"] = self.growth_class.degree
        out.update(
            dim=str(self.dim),
            exact=self.exact,
            suspect_gap=self.suspect_gap,
            window_used=self.window_used,
        )
        return out


def _values(seq: Union[GrowthSequence, Sequence[int]]):
    return list(seq.values) if isinstance(seq, GrowthSequence) else list(seq)


def _loglog(d_last: int, n_last: int) -> Fraction:
    if n_last < 2 or d_last < 1:
        return Fraction(0)
    return Fraction(round(math.log(d_last) / math.log(n_last) * 10_000), 10_000)


def classify_growth(
    seq: Union[GrowthSequence, Sequence[int]],
    window: int = DEFAULT_WINDOW,
    max_degree: int = DEFAULT_MAX_DEGREE,
    ratio: Fraction = DEFAULT_RATIO,
) -> GrowthClass:
    """Decide the asymptotic class from the tail of the sequence.

    Tried in order: constant tail; constant nonzero k-th differences for the
    smallest k <= max_degree whose difference table still has ``window``
    entries; successive ratios all >= ``ratio``; otherwise inconclusive.
    """
    d = _values(seq)
    if window < 3:
        raise ValueError("window must be at least 3")
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    if len(d) < window + 1:
        raise InsufficientData(f"need at least {window + 1} terms, got {len(d)}")
    tail = d[-window:]
    if len(set(tail)) == 1:
        return GrowthClass.bounded()
    diff = d
    for k in range(1, max_degree + 1):
        diff = [b - a for a, b in zip(diff, diff[1:])]
        if len(diff) < window:
            break
        last = diff[-window:]
        if len(set(last)) == 1 and last[0] != 0:
            return GrowthClass.polynomial(k)
    steps = list(zip(d[-window - 1:-1], d[-window:]))
    if all(a > 0 and Fraction(b, a) >= ratio for a, b in steps):
        return GrowthClass.exponential()
    return GrowthClass.inconclusive(_loglog(d[-1], len(d) - 1))


def estimate_gkdim(
    seq: Union[GrowthSequence, Sequence[int]],
    window: int = DEFAULT_WINDOW,
    max_degree: int = DEFAULT_MAX_DEGREE,
    ratio: Fraction = DEFAULT_RATIO,
) -> GKEstimate:
    cls = classify_growth(seq, window, max_degree, ratio)
    if cls.kind == "bounded":
        dim, exact = DimValue(0), True
    elif cls.kind == "polynomial":
        dim, exact = DimValue(cls.degree), True
    elif cls.kind == "exponential":
        dim, exact = INF, True
    else:
        dim, exact = DimValue(cls.loglog_estimate), False
    suspect = dim.is_finite and 1 < dim.value < 2
    return GKEstimate(cls, dim, exact, window, suspect)
