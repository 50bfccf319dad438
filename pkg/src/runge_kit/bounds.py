"""Explicit height bounds for integral points, evaluated with outward rounding.

Every returned float is an upper bound for the exact real expression: values
are computed in :mod:`runge_kit.interval` and the upper endpoint is reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .interval import Interval, ilog, iv

__all__ = [
    "BoundReport",
    "ExactForm",
    "SplitCartanCase",
    "rho",
    "rho_aggregate",
    "bound_theorem_1_1",
    "bound_theorem_1_2",
    "bound_refined",
    "bound_split_cartan",
    "split_cartan_case",
    "bound_x0_plus",
    "isogeny_height_gap",
    "x0_plus_chain",
    "theorem_1_2_exact",
    "refined_exact",
    "refined_with_budget_exact",
    "report_theorem_1_2",
    "report_refined",
    "report_split_cartan",
    "report_x0_plus",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _prime_divisors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class ExactForm:
    """``coeff * base**exponent * log(log_arg)`` with exact rational parts."""

    coeff: Fraction
    base: int
    exponent: Fraction
    log_arg: Fraction

    def same_value(self, other: "ExactForm") -> bool:
        if self.log_arg != other.log_arg:
            return False
        # identical radicals compare by coefficient alone
        if (self.base, self.exponent) == (other.base, other.exponent):
            return self.coeff == other.coeff
        return self.interval().hi >= other.interval().lo and other.interval().hi >= self.interval().lo

    def interval(self) -> Interval:
        e = self.exponent
        rad = iv(self.base) ** int(e.numerator)
        if e.denominator == 2:
            rad = rad.sqrt()
        elif e.denominator != 1:
            raise ValueError("only integer and half-integer exponents")
        return iv(self.coeff) * rad * ilog(self.log_arg)


@dataclass
class BoundReport:
    theorem_tag: str
    inputs: dict[str, Any]
    value: float
    breakdown: dict[str, float] = field(default_factory=dict)
    chain_value: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem_tag,
            "inputs": self.inputs,
            "value": self.value,
            "breakdown": self.breakdown,
        }
        if self.chain_value is not None:
            out["chain_value"] = self.chain_value
        if self.notes:
            out["notes"] = self.notes
        return out


# -- local constants ---------------------------------------------------------

def _rho_iv(N: int, kind: str, p: int | None = None) -> Interval:
    if N < 2:
        raise ValueError("N must be >= 2")
    if kind == "infinite":
        return iv(12 * N) * ilog(N)
    if kind == "finite-coprime":
        return iv(0)
    if kind == "finite-dividing":
        if p is None or N % p or not _is_prime(p):
            raise ValueError(f"finite-dividing place needs a prime p dividing N={N}")
        return iv(12 * N) * ilog(p) / (p - 1)
    raise ValueError(f"invalid place kind {kind!r}")


def rho(N: int, place_kind: str, p: int | None = None) -> float:
    """Local error constant: ``12N log N`` (archimedean), 0 (v coprime to N),
    ``12N log p / (p - 1)`` (v above a prime p dividing N)."""
    return _rho_iv(N, place_kind, p).hi


def rho_aggregate(N: int, d: int = 1) -> dict[str, float]:
    """Weighted sums of rho over the archimedean and finite places of a degree-d field."""
    inf = iv(12 * d * N) * ilog(N)
    fin = iv(0)
    for p in _prime_divisors(N):
        fin = fin + ilog(p) / (p - 1)
    fin = iv(12 * d * N) * fin
    return {"infinite": inf.hi, "finite": fin.hi, "finite_cap": inf.hi}


# -- general bounds --------------------------------------------------------

def bound_theorem_1_1(N: int, G_order: int) -> float:
    """``12 |G| N^2 log 3N`` for integral points over Q."""
    return (iv(12 * G_order * N * N) * ilog(3 * N)).hi


def _sqrt_factor(s: int) -> Interval:
    """``s ** (s/2 + 1)``."""
    base = iv(s) ** (s + 2)
    return base.sqrt()


def bound_theorem_1_2(N: int, G_order: int, s: int, infinite_only: bool = False) -> float:
    """``36 s^(s/2+1) (N^2 |G| / 2)^s log 2N``, or ``24 ... log 3N`` when S is
    the set of archimedean places."""
    return theorem_1_2_exact(N, G_order, s, infinite_only).interval().hi


def theorem_1_2_exact(N: int, G_order: int, s: int, infinite_only: bool = False) -> ExactForm:
    if s < 1:
        raise ValueError("s must be >= 1")
    c, arg = (24, 3 * N) if infinite_only else (36, 2 * N)
    return ExactForm(Fraction(c) * Fraction(N * N * G_order, 2) ** s, s, Fraction(s, 2) + 1, Fraction(arg))


def refined_exact(N: int, gprime_order: int, B, infinite_only: bool = False) -> ExactForm:
    c, arg = (24, 3 * N) if infinite_only else (36, 2 * N)
    return ExactForm(Fraction(c * gprime_order * N * N) * Fraction(B), 1, Fraction(0), Fraction(arg))


def refined_with_budget_exact(N: int, gprime_order: int, s: int, infinite_only: bool = False) -> ExactForm:
    """The refined bound with B replaced by the Runge-unit budget
    ``s^(s/2+1) (|G'| N^2)^(s-1)``, kept symbolic in the radical."""
    c, arg = (24, 3 * N) if infinite_only else (36, 2 * N)
    A = gprime_order * N * N
    return ExactForm(Fraction(c * A ** (s - 1) * gprime_order * N * N), s, Fraction(s, 2) + 1, Fraction(arg))


def bound_refined(N: int, gprime_order: int, B: int, infinite_only: bool = False) -> float:
    """``36 B |G'| N^2 log 2N`` (or ``24 B |G'| N^2 log 3N``)."""
    if B < 1:
        raise ValueError("B must be >= 1")
    return refined_exact(N, gprime_order, B, infinite_only).interval().hi


def _xi_terms(N: int, BG: Interval, infinite_only: bool) -> dict[str, Interval]:
    logN = ilog(N)
    c1 = 12 if infinite_only else 24
    xi1 = ilog(7000) / N + iv(c1 * N) * BG * logN
    xi2 = iv(N) * BG * ilog(5900) + iv(12 * N) * BG * logN
    xi3 = iv(12 * N) * BG * ilog(2)
    return {"Xi1_coeff": xi1, "Xi2_coeff": xi2, "Xi3_coeff": xi3}


def _report_general(tag, inputs, value: Interval, BG: Interval, N: int, infinite_only: bool) -> BoundReport:
    terms = _xi_terms(N, BG, infinite_only)
    chain = iv(N) * (terms["Xi1_coeff"] + terms["Xi2_coeff"] + terms["Xi3_coeff"])
    rep = BoundReport(tag, inputs, value.hi, {k: v.hi for k, v in terms.items()}, chain.hi)
    if chain.hi > value.hi:
        raise AssertionError(f"{tag}: recombined chain {chain.hi} exceeds stated bound {value.hi}")
    return rep


def report_refined(N: int, gprime_order: int, B: int, infinite_only: bool = False) -> BoundReport:
    value = refined_exact(N, gprime_order, B, infinite_only).interval()
    inputs = {"N": N, "Gprime": gprime_order, "B": B, "infinite_only": infinite_only}
    return _report_general("refined", inputs, value, iv(B * gprime_order), N, infinite_only)


def report_theorem_1_2(N: int, G_order: int, s: int, infinite_only: bool = False) -> BoundReport:
    value = theorem_1_2_exact(N, G_order, s, infinite_only).interval()
    gp = Fraction(G_order, 2)
    A = iv(gp * N * N)
    budget = _sqrt_factor(s) * A ** (s - 1)
    inputs = {"N": N, "G": G_order, "s": s, "infinite_only": infinite_only}
    rep = _report_general("theorem_1_2", inputs, value, budget * iv(gp), N, infinite_only)
    rep.breakdown["B_budget"] = budget.hi
    return rep


# -- split Cartan ------------------------------------------------------------

@dataclass(frozen=True)
class SplitCartanCase:
    tag: str  # case tag from the public API: "6.4", "6.5" or "6.6"
    exponents: dict  # (k1, k2) at level p -> exponent
    B: int


def _orbit_name(x) -> str:
    names = {0: "inf", 1: "0", 2: "k", "inf": "inf", "0": "0", "k": "k",
             "c_inf": "inf", "c_0": "0", "c_k": "k"}
    try:
        return names[x]
    except KeyError:
        raise ValueError(f"unknown split Cartan orbit {x!r}") from None


def split_cartan_case(sigma) -> SplitCartanCase:
    """Classify a set of split-Cartan cusp orbits and return the matching unit.

    Orbits are named ``"inf"``, ``"0"`` and ``"k"`` (the p-1 conjugate cusps),
    or given as indices 0, 1, 2 in ``galois_orbits`` order.
    """
    names = {_orbit_name(x) for x in sigma}
    if len(names) > 2:
        raise ValueError("sigma has more than two orbits")
    if names <= {"inf", "k"}:
        return SplitCartanCase("6.4", {(1, 0): -1}, 1)
    if names <= {"0", "k"}:
        return SplitCartanCase("6.5", {(0, 1): -1}, 1)
    return SplitCartanCase("6.6", {(1, 0): 1, (0, 1): 1}, 2)


def _check_odd_prime(p: int) -> None:
    if p < 3 or not _is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def bound_split_cartan(p: int, case: str = "single-rational") -> float:
    """``24 p log 3p`` in the generic cases, ``72 log 3p`` when both rational cusps are involved."""
    return _split_cartan_iv(p, case).hi


def _split_cartan_iv(p: int, case: str) -> Interval:
    _check_odd_prime(p)
    if case in ("single-rational", "6.4", "6.5"):
        return iv(24 * p) * ilog(3 * p)
    if case in ("two-rational", "6.6"):
        return iv(72) * ilog(3 * p)
    raise ValueError(f"unknown split Cartan case {case!r}")


def report_split_cartan(p: int, case: str = "single-rational") -> BoundReport:
    value = _split_cartan_iv(p, case)
    logp = ilog(p)
    q = p - 1
    if case in ("two-rational", "6.6"):
        f = iv(Fraction(q ** 3, 2))
        xi1 = f * ilog(7000) + iv(12 * q * q * p) * logp
        xi2 = iv(q * q * p) * ilog(5900) + iv(12 * q * q * p) * logp
        xi3 = iv(0)
        B = 2
    else:
        f = iv(Fraction(q * q, 2))
        xi1 = f * ilog(7000) + iv(6 * q * q * p) * logp
        xi2 = iv(Fraction(q * q * p, 2)) * ilog(5900) + iv(6 * q * q * p) * logp
        xi3 = iv(6 * q * p) * logp
        B = 1
    chain = (xi1 + xi2 + xi3) / f
    if chain.hi > value.hi:
        raise AssertionError(f"split Cartan chain {chain.hi} exceeds {value.hi}")
    return BoundReport(
        "split_cartan", {"p": p, "case": case, "B": B}, value.hi,
        {"Xi1_coeff": xi1.hi, "Xi2_coeff": xi2.hi, "Xi3_coeff": xi3.hi, "ord_over_width": f.hi},
        chain.hi,
    )


# -- X_0^+(p^r) ---------------------------------------------------------------

def bound_x0_plus(p: int) -> float:
    """``110 p log p`` for integral points of Y_0(p^r) over a quadratic field."""
    _check_odd_prime(p)
    return (iv(110 * p) * ilog(p)).hi


def _gap_iv(h_prime, delta: int) -> Interval:
    if delta < 1:
        raise ValueError("isogeny degree must be >= 1")
    h = h_prime if isinstance(h_prime, Interval) else iv(h_prime)
    if h.lo < 0:
        raise ValueError("height must be non-negative")
    return iv(13) * ilog(h + 1) + iv(7) * ilog(delta) + 100


def isogeny_height_gap(h_prime: float, delta: int) -> float:
    """``13 log(1 + h') + 7 log delta + 100``."""
    return _gap_iv(h_prime, delta).hi


def x0_plus_chain(p: int) -> float:
    """Split Cartan bound transported along a p-isogeny."""
    h = _split_cartan_iv(p, "single-rational")
    return (h + _gap_iv(h, p)).hi


def report_x0_plus(p: int) -> BoundReport:
    value = bound_x0_plus(p)
    h = _split_cartan_iv(p, "single-rational")
    gap = _gap_iv(h, p)
    chain = (h + gap).hi
    if chain > value:
        raise AssertionError(f"isogeny chain {chain} exceeds {value} at p={p}")
    return BoundReport(
        "x0_plus", {"p": p}, value,
        {"split_cartan": h.hi, "isogeny_gap": gap.hi}, chain,
        notes=["kappa(d) and p0 are non-effective; no numeric value is reported"],
    )
