"""Cuspidal divisors of the Siegel units ``u_a`` on X(N) and ``w_a`` on X_G."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .cusps import (
    Cusp,
    _cusps_of_XN,
    _frozen_h,
    _geometric,
    _galois,
    infinity_cusp,
    scaling_matrix,
)
from .exactmath import IntMatrix, ell
from .gl2 import Subgroup, UnitLabel, act_label, label_classes, label_orbit, unit_galois_group
from .interval import ilog, iv

__all__ = [
    "ConventionError",
    "Divisor",
    "LeadingOrderData",
    "ord_u_infinity",
    "ord_u",
    "div_u",
    "div_w",
    "divisor_matrix",
    "siegel_leading_order",
    "lambda_integrality",
    "UNIT_ROOT",
    "ONE_MINUS_ZETA",
]


class ConventionError(AssertionError):
    """A divisor computation produced a non-integral or lift-dependent order."""


@dataclass(frozen=True)
class Divisor:
    curve_tag: str  # "XN" or "XG"
    coefficients: tuple[int, ...]  # indexed by X(N) cusp or by geometric cusp of X_G

    def degree(self, weights=None) -> int:
        if weights is None:
            return sum(self.coefficients)
        return sum(w * c for w, c in zip(weights, self.coefficients))

    def __getitem__(self, i: int) -> int:
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)

    def support(self) -> dict[int, int]:
        return {i: v for i, v in enumerate(self.coefficients) if v}


def ord_u_infinity(a: UnitLabel) -> int:
    """``12 N^2 ell_a``: order of ``u_a`` at infinity in the parameter ``q^(1/N)``."""
    v = 12 * a.level ** 2 * ell(a)
    assert v.denominator == 1
    return int(v)


def ord_u(a: UnitLabel, c: Cusp) -> int:
    """Order of ``u_a`` at the X(N) cusp ``c``.

    Moves ``c`` to infinity with ``M_c^-1`` and reads off the order there.
    """
    if a.level != c.level:
        raise ValueError("level mismatch")
    return ord_u_infinity(act_label(a, scaling_matrix(c).inverse()))


def div_u(a: UnitLabel) -> Divisor:
    """Divisor of ``u_a`` on X(N), indexed like ``cusps_of_XN(N)``."""
    return Divisor("XN", tuple(ord_u(a, c) for c in _cusps_of_XN(a.level)))


@lru_cache(maxsize=None)
def _div_w_cached(a: UnitLabel, G: Subgroup, H: frozenset) -> tuple[int, ...]:
    N = G.level
    Gp = unit_galois_group(G, H)
    orbit = label_orbit(a, Gp)
    geo = _geometric(G)
    out = []
    for gc in geo:
        vals = set()
        for c in gc.members:
            vals.add(sum(m * ord_u(b, c) for b, m in orbit.items()))
        if len(vals) != 1:
            raise ConventionError(f"order of w_{a} depends on the lift of {gc.representative}")
        raw = Fraction(gc.width * vals.pop(), N)
        if raw.denominator != 1:
            raise ConventionError(f"non-integral order {raw} of w_{a} at {gc.representative}")
        out.append(int(raw))
    return tuple(out)


def div_w(a: UnitLabel, G: Subgroup, H_K) -> Divisor:
    """Divisor of ``w_a = prod_{sigma in G'} u_{a sigma}`` on X_G.

    At a geometric cusp with width ``e`` the order is ``(e / N)`` times the order
    of the product at any lift to X(N); both integrality and lift independence
    are checked.
    """
    if a.level != G.level:
        raise ValueError("level mismatch")
    return Divisor("XG", _div_w_cached(a.canonical(), G, _frozen_h(G, H_K)))


@lru_cache(maxsize=None)
def _matrix_cached(G: Subgroup, H: frozenset) -> IntMatrix:
    orbits = _galois(G, H)
    cols = [_div_w_cached(a, G, H) for a in label_classes(G.level)]
    rows = [[col[orb.representative] for col in cols] for orb in orbits]
    return IntMatrix.from_rows(rows, len(cols))


def divisor_matrix(G: Subgroup, H_K) -> IntMatrix:
    """``(ord_c w_a)`` with one row per Galois orbit (its first geometric cusp)
    and one column per +- class of labels, in ``label_classes(N)`` order."""
    return _matrix_cached(G, _frozen_h(G, H_K))


UNIT_ROOT = "unit-root-of-unity"
ONE_MINUS_ZETA = "root-of-unity-times(1-zeta_M)"


@dataclass(frozen=True)
class LeadingOrderData:
    label: UnitLabel
    order: Fraction
    coefficient_class: str
    M: int | None = None


def siegel_leading_order(a: UnitLabel) -> LeadingOrderData:
    """Leading term of ``g_a`` in a non-archimedean q-expansion.

    For ``0 < a1 < 1`` the leading coefficient is a root of unity; for ``a1 = 0``
    it is a root of unity times ``1 - zeta_M`` with M the order of ``a2``.
    """
    if a.k1 != 0:
        return LeadingOrderData(a, ell(a), UNIT_ROOT)
    M = a.level // gcd(a.k2, a.level)
    return LeadingOrderData(a, ell(a), ONE_MINUS_ZETA, M)


def lambda_integrality(B: int, gprime_order: int, N: int) -> float:
    """Upper bound ``12 B |G'| N log 2`` for the height of the integrality factor."""
    if B < 1:
        raise ValueError("B must be >= 1")
    return (iv(12 * B * gprime_order * N) * ilog(2)).hi


def infinity_row(G: Subgroup) -> int:
    from .cusps import cusp_index

    return cusp_index(G)[infinity_cusp(G.level)]
