"""Cusps of X(N) and X_G, widths, and Galois orbits.

A cusp of X(N) is the +- class of a primitive row vector ``(x, y)`` mod N, the
cusp at infinity being ``+-(0, 1)``. ``scaling_matrix(c)`` is an SL2 matrix
whose bottom row is ``c``, so ``c . M_c^-1 = (0, 1)``.

The geometric part ``G cap SL2`` acts by right multiplication. An element
``g`` of G with ``det g`` in H_K moves cusps by ``c -> c . adj(g)``
(``adj(g) = det(g) g^-1``); for SL2 elements this is just ``c . g^-1``.
This is the action under which the units ``w_a`` are invariant.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .gl2 import Mat, ResidueMatrix, Subgroup, mat_adj, mat_inv, mat_mul, unit_galois_group

__all__ = [
    "Cusp",
    "GeometricCusp",
    "CuspOrbit",
    "RungeReport",
    "cusps_of_XN",
    "geometric_cusps",
    "cusp_width",
    "scaling_matrix",
    "galois_orbits",
    "runge_condition",
    "infinity_cusp",
]


def _canon(x: int, y: int, N: int) -> tuple[int, int]:
    v = (x % N, y % N)
    w = (-x % N, -y % N)
    return min(v, w)


@dataclass(frozen=True, order=True)
class Cusp:
    level: int
    x: int
    y: int

    def __post_init__(self):
        N = self.level
        if gcd(gcd(self.x, self.y), N) != 1:
            raise ValueError(f"({self.x}, {self.y}) is not primitive mod {N}")
        x, y = _canon(self.x, self.y, N)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def vector(self) -> tuple[int, int]:
        return (self.x, self.y)

    def act(self, g: Mat) -> "Cusp":
        """Right action ``c . g``."""
        a, b, c, d = g
        return Cusp(self.level, self.x * a + self.y * c, self.x * b + self.y * d)


def infinity_cusp(N: int) -> Cusp:
    return Cusp(N, 0, 1)


@dataclass(frozen=True)
class GeometricCusp:
    members: tuple[Cusp, ...]
    width: int

    @property
    def representative(self) -> Cusp:
        return self.members[0]

    def __contains__(self, c: Cusp) -> bool:
        return c in self.members


@dataclass(frozen=True)
class CuspOrbit:
    members: tuple[int, ...]  # indices into geometric_cusps(G)

    @property
    def degree(self) -> int:
        return len(self.members)

    @property
    def representative(self) -> int:
        return self.members[0]


@lru_cache(maxsize=None)
def _cusps_of_XN(N: int) -> tuple[Cusp, ...]:
    out = set()
    for x in range(N):
        for y in range(N):
            if gcd(gcd(x, y), N) == 1:
                out.add(Cusp(N, x, y))
    return tuple(sorted(out))


def cusps_of_XN(N: int) -> list[Cusp]:
    if N < 2:
        raise ValueError(f"level must be >= 2, got {N}")
    return list(_cusps_of_XN(N))


def _orbits(points, acting) -> list[tuple]:
    """Orbits of ``points`` under right action by every matrix in ``acting``."""
    acting = list(acting)
    seen: set = set()
    out = []
    for p in points:
        if p in seen:
            continue
        orb = {p.act(g) for g in acting}
        orb.add(p)
        seen |= orb
        out.append(tuple(sorted(orb)))
    return out


@lru_cache(maxsize=None)
def scaling_matrix(c: Cusp) -> ResidueMatrix:
    """Canonical ``M_c`` in SL2(Z/NZ) with bottom row ``c``."""
    N = c.level
    x, y = c.x, c.y
    if x == 0:
        x = N
    k = 0
    while gcd(x, y + k * N) != 1:
        k += 1
    y1 = y + k * N
    # solve a*y1 - b*x = 1
    g, s, t = _egcd(y1, x)
    assert g == 1
    a, b = s, -t
    best = min(((a + j * x) % N, (b + j * y1) % N) for j in range(N))
    M = ResidueMatrix(best[0], best[1], c.x, c.y, N)
    assert M.det() == 1 % N
    return M


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, s, t = _egcd(b, a % b)
    return g, t, s - (a // b) * t


def cusp_width(G: Subgroup, c) -> int:
    """Ramification index of X_G -> X(1) at ``c``.

    Smallest ``e >= 1`` with ``M_c^-1 U^e M_c`` in G, where the conjugate is the
    stabiliser of ``c`` generated from that of infinity.
    """
    if isinstance(c, GeometricCusp):
        c = c.representative
    N = G.level
    M = scaling_matrix(c).tup
    Mi = mat_inv(M, N)
    for e in range(1, N + 1):
        h = mat_mul(mat_mul(Mi, (1, e % N, 0, 1), N), M, N)
        if h in G.raw:
            return e
    raise AssertionError("unreachable: U^N is the identity")


@lru_cache(maxsize=None)
def _geometric(G: Subgroup) -> tuple[GeometricCusp, ...]:
    orbs = _orbits(_cusps_of_XN(G.level), G.sl2_part)
    return tuple(GeometricCusp(o, cusp_width(G, o[0])) for o in orbs)


def geometric_cusps(G: Subgroup) -> list[GeometricCusp]:
    return list(_geometric(G))


@lru_cache(maxsize=None)
def cusp_index(G: Subgroup) -> dict:
    """Map each X(N) cusp to the index of its geometric cusp on X_G."""
    return {c: i for i, gc in enumerate(_geometric(G)) for c in gc.members}


@lru_cache(maxsize=None)
def _galois(G: Subgroup, H: frozenset) -> tuple[CuspOrbit, ...]:
    Gp = unit_galois_group(G, H)
    N = G.level
    acting = {mat_adj(g, N) for g in Gp.full}
    idx = cusp_index(G)
    orbs = _orbits(_cusps_of_XN(N), acting)
    out = []
    for o in orbs:
        members = sorted({idx[c] for c in o})
        out.append(CuspOrbit(tuple(members)))
    out.sort(key=lambda orb: orb.members)
    return tuple(out)


def galois_orbits(G: Subgroup, H_K) -> list[CuspOrbit]:
    """``C(G, K)``: Galois orbits of the geometric cusps of X_G, sorted by first member."""
    return list(_galois(G, _frozen_h(G, H_K)))


def _frozen_h(G: Subgroup, H_K) -> frozenset:
    from .gl2 import resolve_galois

    if isinstance(H_K, str) or H_K is None:
        return resolve_galois(G, H_K)
    return frozenset(u % G.level for u in H_K)


@dataclass(frozen=True)
class RungeReport:
    satisfied: bool
    orbit_count: int
    place_count: int

    def __bool__(self) -> bool:
        return self.satisfied


def runge_condition(G: Subgroup, H_K, s: int) -> RungeReport:
    """``|C(G, K)| > s``."""
    if s < 1:
        raise ValueError("place count must be >= 1")
    n = len(galois_orbits(G, H_K))
    return RungeReport(n > s, n, s)
