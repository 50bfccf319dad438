"""Minimal outward-rounded interval arithmetic on doubles.

Every operation widens its result by one ulp on each side, which dominates the
rounding error of IEEE arithmetic and of a faithfully rounded ``math.log``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Interval", "iv", "ilog"]

_INF = math.inf


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x) -> "Interval":
        if isinstance(x, int) and abs(x) < 2**53:
            return cls(float(x), float(x))
        if isinstance(x, Fraction) or isinstance(x, int):
            f = float(x)
            if Fraction(f) == Fraction(x):
                return cls(f, f)
            return cls(_down(f), _up(f))
        f = float(x)
        return cls(f, f)

    def __add__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = _coerce(other)
        ps = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(_down(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = _coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains 0")
        qs = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi]
        return Interval(_down(min(qs)), _up(max(qs)))

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Interval(1.0, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError("sqrt of negative interval")
        return Interval(max(0.0, _down(math.sqrt(self.lo))), _up(math.sqrt(self.hi)))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _coerce(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.exact(x)


def iv(x) -> Interval:
    return _coerce(x)


def ilog(x) -> Interval:
    x = _coerce(x)
    if x.lo <= 0:
        raise ValueError("log of non-positive interval")
    return Interval(_down(math.log(x.lo)), _up(math.log(x.hi)))
