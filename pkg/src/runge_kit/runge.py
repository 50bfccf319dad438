"""Runge units: products of ``w_a`` with positive order on a chosen set of cusp orbits."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cusps import _frozen_h, _galois, _geometric
from .exactmath import (
    ExponentVector,
    RankDeficiencyError,
    lemma_budget_holds,
    positive_combination,
    rank,
)
from .gl2 import Subgroup, UnitLabel, act_label, label_classes, unit_galois_group
from .units import Divisor, _matrix_cached, lambda_integrality, ord_u

__all__ = [
    "RungeConditionError",
    "RungeUnit",
    "VerificationResult",
    "runge_unit",
    "runge_unit_from_exponents",
    "verify_runge_unit",
    "budget_bound",
]


class RungeConditionError(ValueError):
    """The requested orbit set is all of C(G, K)."""


def budget_bound(s: int, gprime_order: int, N: int) -> Fraction | tuple[int, int]:
    """``s^(s/2+1) (|G'| N^2)^(s-1)`` as an exact number when s is even, else as
    the pair ``(s, rest)`` meaning ``sqrt(s) * rest``."""
    A = gprime_order * N * N
    if s % 2 == 0:
        return s ** (s // 2 + 1) * A ** (s - 1)
    return (s, s ** ((s + 1) // 2) * A ** (s - 1))


@dataclass(frozen=True)
class RungeUnit:
    group: Subgroup = field(repr=False)
    galois_image: frozenset[int]
    sigma: tuple[int, ...]  # indices into galois_orbits(G, H_K)
    s: int
    labels: tuple[UnitLabel, ...]
    exponents: ExponentVector
    divisor: Divisor

    @property
    def budget_B(self) -> int:
        return self.exponents.l1_norm

    @property
    def gprime_order(self) -> int:
        return unit_galois_group(self.group, self.galois_image).order

    @property
    def lambda_height(self) -> float:
        return lambda_integrality(max(self.budget_B, 1), self.gprime_order, self.group.level)

    def budget_ok(self) -> bool:
        A = self.gprime_order * self.group.level ** 2
        return lemma_budget_holds(self.budget_B, self.s, A)

    def nonzero_exponents(self) -> list[tuple[UnitLabel, int]]:
        return [(a, b) for a, b in zip(self.labels, self.exponents) if b]


def _combine(G: Subgroup, H: frozenset, b) -> Divisor:
    cols = _matrix_cached_columns(G, H)
    geo = len(_geometric(G))
    coeffs = [0] * geo
    for col, bj in zip(cols, b):
        if bj:
            for i in range(geo):
                coeffs[i] += bj * col[i]
    return Divisor("XG", tuple(coeffs))


def _matrix_cached_columns(G: Subgroup, H: frozenset):
    from .units import _div_w_cached

    return [_div_w_cached(a, G, H) for a in label_classes(G.level)]


def _check_sigma(G: Subgroup, H: frozenset, sigma) -> tuple[int, ...]:
    orbits = _galois(G, H)
    sig = tuple(sorted(set(int(i) for i in sigma)))
    if any(i < 0 or i >= len(orbits) for i in sig):
        raise ValueError(f"orbit index out of range 0..{len(orbits) - 1}")
    if len(sig) >= len(orbits):
        raise RungeConditionError(
            f"sigma covers all {len(orbits)} cusp orbits; no Runge unit exists"
        )
    return sig


def runge_unit(G: Subgroup, H_K, sigma, s: int | None = None) -> RungeUnit:
    """Construct a Runge unit for the proper orbit set ``sigma``.

    Rows of the divisor matrix for ``sigma`` are fed to
    :func:`~runge_kit.exactmath.positive_combination`; the resulting unit has
    strictly positive order at every cusp of every orbit in ``sigma``.
    """
    H = _frozen_h(G, H_K)
    sig = _check_sigma(G, H, sigma)
    if s is None:
        s = max(len(sig), 1)
    if s < len(sig) or s < 1:
        raise ValueError("s must be >= |sigma| and >= 1")
    M = _matrix_cached(G, H)
    labels = tuple(label_classes(G.level))
    if not sig:
        b = ExponentVector((0,) * len(labels))
    else:
        sub = M.select_rows(sig)
        try:
            b = positive_combination(sub)
        except RankDeficiencyError as exc:
            raise AssertionError(
                f"rows {sig} of the divisor matrix are dependent (rank {rank(sub)})"
            ) from exc
    div = _combine(G, H, b.entries)
    unit = RungeUnit(G, H, sig, s, labels, b, div)
    orbits = _galois(G, H)
    for i in sig:
        for m in orbits[i].members:
            if div[m] <= 0:
                raise AssertionError(f"constructed unit has order {div[m]} at cusp {m}")
    return unit


def runge_unit_from_exponents(G: Subgroup, H_K, sigma, exponents: dict, s: int | None = None) -> RungeUnit:
    """Wrap hand-chosen exponents ``{label: b}`` as a :class:`RungeUnit`."""
    H = _frozen_h(G, H_K)
    orbits = _galois(G, H)
    sig = tuple(sorted(set(sigma)))
    if any(i < 0 or i >= len(orbits) for i in sig):
        raise ValueError("orbit index out of range")
    labels = tuple(label_classes(G.level))
    pos = {a: i for i, a in enumerate(labels)}
    b = [0] * len(labels)
    for a, e in exponents.items():
        if not isinstance(a, UnitLabel):
            a = UnitLabel(G.level, *a)
        b[pos[a.canonical()]] += int(e)
    if s is None:
        s = max(len(sig), 1)
    return RungeUnit(G, H, sig, s, labels, ExponentVector(tuple(b)), _combine(G, H, b))


@dataclass
class VerificationResult:
    passed: bool
    positivity: bool
    budget: bool
    degree_zero: bool
    divisor_matches: bool
    witnesses: list[dict]

    def __bool__(self) -> bool:
        return self.passed


def _divisor_from_scratch(G: Subgroup, H: frozenset, labels, b) -> list[int]:
    """Recompute ``sum_a b_a (w_a)`` by summing over every element of G'.

    Independent of the cached label-orbit route used during construction.
    """
    N = G.level
    Gp = unit_galois_group(G, H)
    geo = _geometric(G)
    out = []
    for gc in geo:
        c = gc.representative
        tot = Fraction(0)
        for a, e in zip(labels, b):
            if not e:
                continue
            acc = 0
            for g in Gp.full:
                acc += ord_u(act_label(a, _rm(g, N)), c)
            # Gp.full counts each +- class twice
            tot += e * Fraction(acc, 2)
        out.append(tot * gc.width / N)
    return out


def _rm(g, N):
    from .gl2 import ResidueMatrix

    return ResidueMatrix.from_tuple(g, N)


def verify_runge_unit(u: RungeUnit) -> VerificationResult:
    G, H = u.group, u.galois_image
    orbits = _galois(G, H)
    fresh = _divisor_from_scratch(G, H, u.labels, u.exponents.entries)
    witnesses: list[dict] = []
    match = [Fraction(x) for x in u.divisor.coefficients] == fresh
    if not match:
        witnesses.append({"check": "divisor", "stored": list(u.divisor.coefficients),
                          "recomputed": [str(x) for x in fresh]})
    positive = True
    for i in u.sigma:
        for m in orbits[i].members:
            if fresh[m] <= 0:
                positive = False
                witnesses.append({"check": "positivity", "orbit": i, "cusp": m, "ord": str(fresh[m])})
    budget = u.budget_ok()
    if not budget:
        witnesses.append({"check": "budget", "B": u.budget_B, "s": u.s})
    deg = sum(fresh)
    degree_zero = deg == 0
    if not degree_zero:
        witnesses.append({"check": "degree", "degree": str(deg)})
    ok = match and positive and budget and degree_zero
    return VerificationResult(ok, positive, budget, degree_zero, match, witnesses)
