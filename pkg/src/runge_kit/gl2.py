"""Subgroups of GL2(Z/NZ), their unit-Galois parts, and the action on unit labels.

Matrices are stored as 4-tuples ``(a, b, c, d)`` of residues in ``[0, N)``
meaning ``[[a, b], [c, d]]``. Vectors are ROW vectors and the group acts on the
right, so ``v . g`` is ``(v1*a + v2*c, v1*b + v2*d)``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "DEFAULT_ELEMENT_CAP",
    "ResidueMatrix",
    "Subgroup",
    "UnitGaloisGroup",
    "UnitLabel",
    "GroupTooLargeError",
    "closure",
    "unit_galois_group",
    "resolve_galois",
    "act_label",
    "label_orbit",
    "units_mod",
    "label_classes",
    "split_cartan",
    "borel",
    "borel_unipotent",
    "normalizer_split_cartan",
    "nonsplit_cartan",
    "full_gl2",
    "trivial_group",
    "sl2_generators",
]

DEFAULT_ELEMENT_CAP = 20_000_000

Mat = tuple[int, int, int, int]


class GroupTooLargeError(RuntimeError):
    pass


def mat_mul(g: Mat, h: Mat, N: int) -> Mat:
    a, b, c, d = g
    e, f, x, y = h
    return ((a * e + b * x) % N, (a * f + b * y) % N, (c * e + d * x) % N, (c * f + d * y) % N)


def mat_det(g: Mat, N: int) -> int:
    return (g[0] * g[3] - g[1] * g[2]) % N


def mat_inv(g: Mat, N: int) -> Mat:
    a, b, c, d = g
    di = pow(mat_det(g, N), -1, N)
    return ((d * di) % N, (-b * di) % N, (-c * di) % N, (a * di) % N)


def mat_adj(g: Mat, N: int) -> Mat:
    """Adjugate ``det(g) * g^-1``; the transpose-free 'cofactor' partner of g."""
    a, b, c, d = g
    return (d % N, -b % N, -c % N, a % N)


def mat_neg(g: Mat, N: int) -> Mat:
    return tuple(-x % N for x in g)  # type: ignore[return-value]


def units_mod(N: int) -> list[int]:
    return [u for u in range(1, N) if gcd(u, N) == 1] if N > 1 else [0]


@dataclass(frozen=True, order=True)
class ResidueMatrix:
    n11: int
    n12: int
    n21: int
    n22: int
    level: int

    def __post_init__(self):
        if self.level < 2:
            raise ValueError(f"level must be >= 2, got {self.level}")
        N = self.level
        object.__setattr__(self, "n11", self.n11 % N)
        object.__setattr__(self, "n12", self.n12 % N)
        object.__setattr__(self, "n21", self.n21 % N)
        object.__setattr__(self, "n22", self.n22 % N)

    @classmethod
    def from_tuple(cls, t: Sequence[int], N: int) -> "ResidueMatrix":
        return cls(t[0], t[1], t[2], t[3], N)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], N: int) -> "ResidueMatrix":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, N)

    @property
    def tup(self) -> Mat:
        return (self.n11, self.n12, self.n21, self.n22)

    def det(self) -> int:
        return mat_det(self.tup, self.level)

    def is_invertible(self) -> bool:
        return gcd(self.det(), self.level) == 1

    def __matmul__(self, other: "ResidueMatrix") -> "ResidueMatrix":
        if other.level != self.level:
            raise ValueError("level mismatch")
        return ResidueMatrix.from_tuple(mat_mul(self.tup, other.tup, self.level), self.level)

    def inverse(self) -> "ResidueMatrix":
        return ResidueMatrix.from_tuple(mat_inv(self.tup, self.level), self.level)

    def tolist(self) -> list[list[int]]:
        return [[self.n11, self.n12], [self.n21, self.n22]]


@dataclass(frozen=True, order=True)
class UnitLabel:
    """Nonzero element ``(k1/N, k2/N)`` of ``(N^-1 Z / Z)^2``."""

    level: int
    k1: int
    k2: int

    def __post_init__(self):
        N = self.level
        if N < 2:
            raise ValueError(f"level must be >= 2, got {N}")
        object.__setattr__(self, "k1", self.k1 % N)
        object.__setattr__(self, "k2", self.k2 % N)
        if self.k1 == 0 and self.k2 == 0:
            raise ValueError("the zero label is excluded")

    @classmethod
    def from_fractions(cls, a1, a2, N: int | None = None) -> "UnitLabel":
        a1, a2 = Fraction(a1), Fraction(a2)
        if N is None:
            N = a1.denominator * a2.denominator // gcd(a1.denominator, a2.denominator)
        k1, k2 = a1 * N, a2 * N
        if k1.denominator != 1 or k2.denominator != 1:
            raise ValueError(f"({a1}, {a2}) is not N-torsion for N={N}")
        return cls(N, int(k1), int(k2))

    def as_fractions(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.k1, self.level), Fraction(self.k2, self.level)

    def __neg__(self) -> "UnitLabel":
        return UnitLabel(self.level, -self.k1, -self.k2)

    def canonical(self) -> "UnitLabel":
        """Representative of ``{a, -a}``; ``u_a = u_{-a}``."""
        return min(self, -self)

    @property
    def order(self) -> int:
        """Exact order of the label in ``(Q/Z)^2``."""
        N = self.level
        return N // gcd(gcd(self.k1, self.k2), N)


def label_classes(N: int) -> list[UnitLabel]:
    """One canonical label per ``+-`` class, sorted."""
    out = set()
    for k1 in range(N):
        for k2 in range(N):
            if k1 or k2:
                out.add(UnitLabel(N, k1, k2).canonical())
    return sorted(out)


def act_label(a: UnitLabel, g: ResidueMatrix) -> UnitLabel:
    if a.level != g.level:
        raise ValueError(f"level mismatch: label {a.level}, matrix {g.level}")
    N = a.level
    return UnitLabel(N, a.k1 * g.n11 + a.k2 * g.n21, a.k1 * g.n12 + a.k2 * g.n22)


class Subgroup:
    """A subgroup of GL2(Z/NZ) containing -I, closed under multiplication."""

    def __init__(self, level: int, elements: Iterable[Mat], generators: Sequence[Mat] = ()):
        self.level = level
        self._elements = frozenset(elements)
        self.generators = tuple(generators)

    @property
    def order(self) -> int:
        return len(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, g) -> bool:
        if isinstance(g, ResidueMatrix):
            g = g.tup
        return tuple(x % self.level for x in g) in self._elements

    @cached_property
    def elements(self) -> tuple[ResidueMatrix, ...]:
        N = self.level
        return tuple(ResidueMatrix.from_tuple(t, N) for t in sorted(self._elements))

    @property
    def raw(self) -> frozenset[Mat]:
        return self._elements

    @cached_property
    def det_image(self) -> frozenset[int]:
        N = self.level
        return frozenset(mat_det(g, N) for g in self._elements)

    @cached_property
    def sl2_part(self) -> frozenset[Mat]:
        N = self.level
        one = 1 % N
        return frozenset(g for g in self._elements if mat_det(g, N) == one)

    def __repr__(self) -> str:
        return f"Subgroup(level={self.level}, order={self.order})"


def _to_mat(g, N: int) -> Mat:
    if isinstance(g, ResidueMatrix):
        if g.level != N:
            raise ValueError(f"generator has level {g.level}, expected {N}")
        return g.tup
    if len(g) == 2:
        (a, b), (c, d) = g
    else:
        a, b, c, d = g
    return (a % N, b % N, c % N, d % N)


def closure(generators: Iterable, level: int, cap: int = DEFAULT_ELEMENT_CAP) -> Subgroup:
    """Smallest subgroup containing the generators and -I.

    Breadth-first saturation by right multiplication with the generators; for a
    finite group this already yields all inverses.
    """
    N = level
    if N < 2:
        raise ValueError(f"level must be >= 2, got {N}")
    gens = [_to_mat(g, N) for g in generators]
    for g in gens:
        if gcd(mat_det(g, N), N) != 1:
            raise ValueError(f"generator {g} is not invertible mod {N}")
    ident = (1, 0, 0, 1 % N)
    minus = mat_neg(ident, N)
    mult = list(dict.fromkeys(gens + [minus]))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in mult:
                y = mat_mul(x, g, N)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise GroupTooLargeError(f"closure exceeds element cap {cap}")
        frontier = nxt
    return Subgroup(N, seen, gens)


@dataclass(frozen=True)
class UnitGaloisGroup:
    """``G' = {g in G : det g in H_K} / +-1``, stored as one matrix per +- class."""

    parent: Subgroup
    galois_image: frozenset[int]
    classes: tuple[Mat, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.classes)

    @property
    def level(self) -> int:
        return self.parent.level

    @cached_property
    def full(self) -> frozenset[Mat]:
        """All matrices of G with determinant in H_K (both signs)."""
        N = self.parent.level
        return frozenset(g for g in self.parent.raw if mat_det(g, N) in self.galois_image)

    @property
    def modulus_pm1(self) -> tuple[ResidueMatrix, ...]:
        N = self.parent.level
        return tuple(ResidueMatrix.from_tuple(t, N) for t in self.classes)


def _pm_rep(g: Mat, N: int) -> Mat:
    return min(g, mat_neg(g, N))


def _subgroup_of_units(gens: Iterable[int], N: int) -> frozenset[int]:
    out = {1 % N}
    frontier = [1 % N]
    gens = [u % N for u in gens]
    for u in gens:
        if gcd(u, N) != 1:
            raise ValueError(f"{u} is not a unit mod {N}")
    while frontier:
        nxt = []
        for x in frontier:
            for u in gens:
                y = x * u % N
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def resolve_galois(G: Subgroup, spec) -> frozenset[int]:
    """Turn a Galois preset into ``H_K``, the image of Gal(Kbar/K) in (Z/NZ)^x.

    ``"full"`` is all units (K meets Q(zeta_N) only in Q), ``"detG"`` is det G,
    anything else is a list of generating units.
    """
    N = G.level
    if spec is None or spec == "detG":
        return G.det_image
    if spec == "full":
        return frozenset(units_mod(N))
    if isinstance(spec, str):
        raise ValueError(f"unknown galois preset {spec!r}")
    return _subgroup_of_units(spec, N)


def unit_galois_group(G: Subgroup, H_K) -> UnitGaloisGroup:
    N = G.level
    H = frozenset(H_K) if not isinstance(H_K, str) else resolve_galois(G, H_K)
    if not H <= G.det_image:
        extra = sorted(H - G.det_image)
        raise ValueError(f"H_K is not contained in det G (offending units {extra})")
    reps = sorted({_pm_rep(g, N) for g in G.raw if mat_det(g, N) in H})
    return UnitGaloisGroup(G, H, tuple(reps))


def label_orbit(a: UnitLabel, Gp: UnitGaloisGroup) -> Counter:
    """Multiset ``{a . sigma : sigma in G'}`` of canonical labels."""
    N = a.level
    out: Counter = Counter()
    for t in Gp.classes:
        out[act_label(a, ResidueMatrix.from_tuple(t, N)).canonical()] += 1
    return out


# -- common groups ---------------------------------------------------------

def trivial_group(N: int) -> Subgroup:
    return closure([], N)


def split_cartan(N: int) -> Subgroup:
    us = units_mod(N)
    return closure([(u, 0, 0, v) for u in us for v in us], N)


def normalizer_split_cartan(N: int) -> Subgroup:
    us = units_mod(N)
    return closure([(u, 0, 0, v) for u in us for v in us] + [(0, 1, 1, 0)], N)


def borel(N: int) -> Subgroup:
    """Upper-triangular matrices ``[[*, *], [0, *]]``."""
    us = units_mod(N)
    return closure([(u, 0, 0, v) for u in us for v in us] + [(1, 1, 0, 1)], N)


def borel_unipotent(N: int) -> Subgroup:
    """``+-[[1, *], [0, *]]``: the X_1(N)-type group, saturated by -I."""
    return closure([(1, 0, 0, v) for v in units_mod(N)] + [(1, 1, 0, 1)], N)


def nonsplit_cartan(p: int) -> Subgroup:
    """Non-split Cartan mod an odd prime p: ``[[a, e*b], [b, a]]`` with e a non-residue."""
    squares = {x * x % p for x in range(1, p)}
    e = next(x for x in range(2, p) if x not in squares)
    gens = [(a, e * b % p, b, a) for a in range(p) for b in range(p) if (a, b) != (0, 0)]
    return closure(gens, p)


def sl2_generators(N: int) -> list[Mat]:
    return [(1, 1, 0, 1), (1, 0, 1, 1)]


def full_gl2(N: int) -> Subgroup:
    return closure(sl2_generators(N) + [(1, 0, 0, u) for u in units_mod(N)], N)
