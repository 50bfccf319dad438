from __future__ import annotations

from dataclasses import replace

import pytest

from runge_kit.cusps import galois_orbits
from runge_kit.exactmath import ExponentVector, lemma_budget_holds
from runge_kit.gl2 import UnitLabel, borel, borel_unipotent, split_cartan, trivial_group
from runge_kit.runge import (
    RungeConditionError,
    budget_bound,
    runge_unit,
    runge_unit_from_exponents,
    verify_runge_unit,
)

INF, ZERO, BIG = 0, 1, 2  # orbit indices for the split Cartan group


def test_budget_bound_forms():
    assert budget_bound(2, 3, 5) == 2 ** 2 * 75
    assert budget_bound(3, 1, 2) == (3, 9 * 16)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("sigma", [[INF], [ZERO], [BIG], [INF, ZERO], [INF, BIG], [ZERO, BIG]])
def test_split_cartan_units_positive(p, sigma):
    G = split_cartan(p)
    u = runge_unit(G, "full", sigma)
    orbits = galois_orbits(G, "full")
    for i in sigma:
        for m in orbits[i].members:
            assert u.divisor[m] > 0
    res = verify_runge_unit(u)
    assert res.passed, res.witnesses
    assert lemma_budget_holds(u.budget_B, u.s, u.gprime_order * p * p)


def test_infinity_singleton_has_positive_order_at_infinity():
    u = runge_unit(split_cartan(5), "full", [INF])
    assert u.divisor[0] > 0


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_hand_built_units_pass(p):
    G = split_cartan(p)
    cases = [
        ([INF, BIG], {(1, 0): -1}),
        ([ZERO, BIG], {(0, 1): -1}),
        ([INF, ZERO], {(1, 0): 1, (0, 1): 1}),
    ]
    for sigma, exps in cases:
        u = runge_unit_from_exponents(G, "full", sigma, exps)
        res = verify_runge_unit(u)
        assert res.passed, (sigma, res.witnesses)
        assert u.budget_B == len(exps)


def test_corrupted_exponents_fail():
    G = split_cartan(5)
    u = runge_unit(G, "full", [INF])
    bad = replace(u, exponents=ExponentVector(tuple(-x for x in u.exponents.entries)))
    res = verify_runge_unit(bad)
    assert not res.passed and not res.positivity
    assert not res.divisor_matches


def test_sigma_full_violates_runge():
    with pytest.raises(RungeConditionError):
        runge_unit(split_cartan(5), "full", [0, 1, 2])


def test_s_smaller_than_sigma_rejected():
    with pytest.raises(ValueError):
        runge_unit(split_cartan(5), "full", [0, 1], s=1)


def test_orbit_index_out_of_range():
    with pytest.raises(ValueError):
        runge_unit(split_cartan(5), "full", [7])


@pytest.mark.parametrize("G,H", [(borel(7), "full"), (borel_unipotent(8), "full"),
                                 (trivial_group(5), "detG"), (borel_unipotent(9), "detG")])
def test_singletons_and_budget(G, H):
    n = len(galois_orbits(G, H))
    for i in range(min(n, 4)):
        u = runge_unit(G, H, [i])
        assert verify_runge_unit(u).passed
        assert u.budget_ok()


def test_larger_s_keeps_exponents():
    G = split_cartan(5)
    a = runge_unit(G, "full", [INF])
    b = runge_unit(G, "full", [INF], s=2)
    assert a.exponents == b.exponents and b.s == 2


def test_determinism():
    G = borel_unipotent(8)
    assert runge_unit(G, "full", [0, 1]).exponents == runge_unit(G, "full", [0, 1]).exponents


def test_nonzero_exponents_labels():
    u = runge_unit_from_exponents(split_cartan(5), "full", [INF, BIG], {UnitLabel(5, 4, 0): -1})
    assert u.nonzero_exponents() == [(UnitLabel(5, 1, 0), -1)]
