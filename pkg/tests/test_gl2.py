from __future__ import annotations

from itertools import product
from math import gcd

import pytest

from runge_kit.gl2 import (
    GroupTooLargeError,
    ResidueMatrix,
    UnitLabel,
    act_label,
    borel,
    closure,
    full_gl2,
    label_classes,
    label_orbit,
    nonsplit_cartan,
    normalizer_split_cartan,
    resolve_galois,
    split_cartan,
    trivial_group,
    unit_galois_group,
)


def brute_gl2(N: int) -> set:
    return {g for g in product(range(N), repeat=4) if gcd((g[0] * g[3] - g[1] * g[2]) % N, N) == 1}


def test_full_gl2_mod_3_matches_enumeration():
    G = full_gl2(3)
    assert G.order == 48 == len(brute_gl2(3))
    assert set(G.raw) == brute_gl2(3)


@pytest.mark.parametrize("N", [2, 4, 5, 6])
def test_full_gl2_orders(N):
    assert full_gl2(N).order == len(brute_gl2(N))


def test_trivial_group_is_pm_identity():
    assert trivial_group(5).order == 2
    assert trivial_group(2).order == 1


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_standard_subgroup_orders(p):
    assert split_cartan(p).order == (p - 1) ** 2
    assert normalizer_split_cartan(p).order == 2 * (p - 1) ** 2
    assert nonsplit_cartan(p).order == p * p - 1
    assert borel(p).order == p * (p - 1) ** 2


def test_closure_rejects_singular_generator():
    with pytest.raises(ValueError):
        closure([[[2, 0], [0, 1]]], 4)


def test_closure_rejects_small_level():
    with pytest.raises(ValueError):
        closure([], 1)


def test_closure_cap():
    with pytest.raises(GroupTooLargeError):
        closure([[[1, 1], [0, 1]], [[0, -1], [1, 0]]], 7, cap=10)


def test_group_is_closed():
    G = borel(6)
    els = list(G.raw)
    for g in els[:20]:
        for h in els:
            r = ResidueMatrix.from_tuple(g, 6) @ ResidueMatrix.from_tuple(h, 6)
            assert r.tup in G


def test_residue_matrix_inverse():
    g = ResidueMatrix(2, 3, 1, 4, 7)
    assert (g @ g.inverse()).tup == (1, 0, 0, 1)


def test_unit_label_rejects_zero():
    with pytest.raises(ValueError):
        UnitLabel(5, 0, 5)


def test_unit_label_fraction_round_trip():
    a = UnitLabel.from_fractions("1/5", "3/5")
    assert (a.level, a.k1, a.k2) == (5, 1, 3)
    assert a.order == 5
    assert UnitLabel(6, 2, 4).order == 3


@pytest.mark.parametrize("N", range(2, 16))
def test_label_class_count(N):
    nonzero = N * N - 1
    two_torsion = 3 if N % 2 == 0 else 0
    assert len(label_classes(N)) == (nonzero - two_torsion) // 2 + two_torsion


def test_act_label_is_a_right_action():
    N = 6
    g = ResidueMatrix(1, 2, 3, 1, N)
    h = ResidueMatrix(5, 1, 1, 0, N)
    a = UnitLabel(N, 1, 4)
    assert act_label(act_label(a, g), h) == act_label(a, g @ h)


def test_galois_presets():
    G = borel(7)
    assert resolve_galois(G, "full") == frozenset(range(1, 7))
    assert resolve_galois(G, "detG") == G.det_image
    assert resolve_galois(G, [3]) == frozenset(range(1, 7))
    assert resolve_galois(G, [2]) == frozenset({1, 2, 4})


def test_unit_galois_group_requires_h_in_det():
    G = trivial_group(5)
    with pytest.raises(ValueError):
        unit_galois_group(G, "full")


def test_unit_galois_group_order():
    p = 5
    Gp = unit_galois_group(split_cartan(p), "full")
    assert Gp.order == (p - 1) ** 2 // 2
    Gp = unit_galois_group(split_cartan(p), [1])
    assert Gp.order == (p - 1) // 2


def test_label_orbit_size():
    p = 7
    Gp = unit_galois_group(split_cartan(p), "full")
    orb = label_orbit(UnitLabel(p, 1, 0), Gp)
    # diag(x, y) sends (1/p, 0) to (x/p, 0): (p-1)/2 classes, each hit p-1 times
    assert len(orb) == (p - 1) // 2
    assert sum(orb.values()) == Gp.order
