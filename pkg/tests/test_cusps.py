from __future__ import annotations

import pytest

from runge_kit.cusps import (
    Cusp,
    cusp_index,
    cusp_width,
    cusps_of_XN,
    galois_orbits,
    geometric_cusps,
    infinity_cusp,
    runge_condition,
    scaling_matrix,
)
from runge_kit.gl2 import (
    borel,
    borel_unipotent,
    full_gl2,
    nonsplit_cartan,
    normalizer_split_cartan,
    split_cartan,
    trivial_group,
)

GROUPS = [
    ("trivial-5", lambda: trivial_group(5)),
    ("trivial-6", lambda: trivial_group(6)),
    ("borel-7", lambda: borel(7)),
    ("borel-12", lambda: borel(12)),
    ("x1-8", lambda: borel_unipotent(8)),
    ("x1-9", lambda: borel_unipotent(9)),
    ("split-7", lambda: split_cartan(7)),
    ("normalizer-7", lambda: normalizer_split_cartan(7)),
    ("nonsplit-5", lambda: nonsplit_cartan(5)),
    ("full-6", lambda: full_gl2(6)),
]


def _psl_size(N: int) -> int:
    return len([g for g in full_gl2(N).raw if (g[0] * g[3] - g[1] * g[2]) % N == 1]) // (2 if N > 2 else 1)


def test_cusp_canonical_form():
    assert Cusp(5, 0, 4) == Cusp(5, 0, 1)
    assert Cusp(5, 3, 2) == Cusp(5, 2, 3)
    with pytest.raises(ValueError):
        Cusp(6, 2, 4)


@pytest.mark.parametrize("N,count", [(2, 3), (3, 4), (4, 6), (5, 12), (6, 12), (7, 24), (12, 48)])
def test_cusps_of_XN_count(N, count):
    assert len(cusps_of_XN(N)) == count


def test_scaling_matrix_bottom_row_and_det():
    for N in (5, 6, 12):
        for c in cusps_of_XN(N):
            M = scaling_matrix(c)
            assert (M.n21, M.n22) == (c.x, c.y)
            assert M.det() == 1
    assert scaling_matrix(infinity_cusp(7)).tup == (1, 0, 0, 1)


def test_trivial_group_widths_are_N():
    for N in (3, 5, 8):
        G = trivial_group(N)
        assert all(cusp_width(G, c) == N for c in cusps_of_XN(N))
        assert len(geometric_cusps(G)) == len(cusps_of_XN(N))


@pytest.mark.parametrize("name,make", GROUPS, ids=[g[0] for g in GROUPS])
def test_width_matches_covering_degree(name, make):
    """e_c = N * |orbit| / |G cap SL2 / +-1|, from the ramification of X(N) -> X_G."""
    G = make()
    N = G.level
    d = len(G.sl2_part) // (2 if N > 2 else 1)
    total = 0
    for gc in geometric_cusps(G):
        assert gc.width * d == N * len(gc.members)
        for c in gc.members:
            assert cusp_width(G, c) == gc.width
        total += gc.width
    # widths add up to the index of the group in PSL2(Z)
    assert total * d == _psl_size(N)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_split_cartan_structure(p):
    G = split_cartan(p)
    geo = geometric_cusps(G)
    assert len(geo) == p + 1
    assert {gc.width for gc in geo} == {p}
    orbits = galois_orbits(G, "full")
    assert sorted(o.degree for o in orbits) == [1, 1, p - 1]
    idx = cusp_index(G)
    assert orbits[0].members == (idx[Cusp(p, 0, 1)],)
    assert orbits[1].members == (idx[Cusp(p, 1, 0)],)


def test_borel_cusps():
    p = 7
    G = borel(p)
    assert sorted(gc.width for gc in geometric_cusps(G)) == [1, p]
    assert len(galois_orbits(G, "full")) == 2


def test_galois_trivial_image_fixes_every_cusp():
    G = trivial_group(5)
    assert all(o.degree == 1 for o in galois_orbits(G, "detG"))


def test_galois_orbits_partition():
    G = borel_unipotent(12)
    orbits = galois_orbits(G, "full")
    members = sorted(m for o in orbits for m in o.members)
    assert members == list(range(len(geometric_cusps(G))))


def test_runge_condition():
    G = split_cartan(5)
    assert runge_condition(G, "full", 2).satisfied
    rep = runge_condition(G, "full", 3)
    assert not rep and rep.orbit_count == 3
    with pytest.raises(ValueError):
        runge_condition(G, "full", 0)
