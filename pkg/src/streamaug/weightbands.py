"""Exact geometric weight banding.

Band boundaries are powers of a rational base, kept as Fractions so that
integer weights near a boundary are always classified exactly; float
logarithms are never consulted.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(*x.as_integer_ratio())
    raise TypeError(f"cannot band with base of type {type(x).__name__}")


class GeometricBands:
    """Assigns positive integer weights to bands [base^j, base^(j+1))."""

    def __init__(self, base):
        base = as_fraction(base)
        if base <= 1:
            raise ValueError(f"band base must exceed 1, got {base}")
        self.base = base
        self._bounds: list[Fraction] = [Fraction(1)]
        # For integer weights, w >= base^j iff w >= ceil(base^j), so the
        # hot path can bisect plain ints.
        self._floors: list[int] = [1]
        self._memo: dict[int, int] = {}

    def _grow(self, w: int) -> None:
        while self._floors[-1] <= w:
            self._bounds.append(self._bounds[-1] * self.base)
            self._floors.append(math.ceil(self._bounds[-1]))

    def index(self, w: int) -> int:
        if w < 1:
            raise ValueError(f"band index needs weight >= 1, got {w}")
        j = self._memo.get(w)
        if j is None:
            self._grow(w)
            j = bisect_right(self._floors, w) - 1
            self._memo[w] = j
        return j

    def lower(self, j: int) -> Fraction:
        """Inclusive lower boundary base^j of band j."""
        while len(self._bounds) <= j:
            self._bounds.append(self._bounds[-1] * self.base)
            self._floors.append(math.ceil(self._bounds[-1]))
        return self._bounds[j]

    def contains(self, j: int, w: int) -> bool:
        return self.lower(j) <= w < self.lower(j + 1)


def ceil_power_index(base, target) -> int:
    """Smallest integer b >= 0 with base^b >= target."""
    base = as_fraction(base)
    target = as_fraction(target)
    if base <= 1:
        raise ValueError("base must exceed 1")
    b = 0
    power = Fraction(1)
    while power < target:
        power *= base
        b += 1
    return b
