# %% [markdown]
# # Building Runge units
#
# Given a proper set of Galois orbits of cusps, a Runge unit is a product of
# the w_a with strictly positive order at every cusp in that set. The
# construction picks a nonsingular block of the divisor matrix and solves
# with Cramer's rule, which also gives an explicit bound on the exponents.

# %%
from __future__ import annotations

from runge_kit.cusps import galois_orbits, runge_condition
from runge_kit.gl2 import borel_unipotent, split_cartan
from runge_kit.runge import (
    RungeConditionError,
    budget_bound,
    runge_unit,
    runge_unit_from_exponents,
    verify_runge_unit,
)

G = split_cartan(7)
for i, o in enumerate(galois_orbits(G, "full")):
    print(i, o.members)

# %% [markdown]
# With two places (say the real place and one prime), three orbits are
# enough for Runge's method; with three places they are not.

# %%
print(runge_condition(G, "full", 2))
print(runge_condition(G, "full", 3))

# %%
u = runge_unit(G, "full", [0, 1])
print("exponents:", u.nonzero_exponents())
print("divisor:", u.divisor.coefficients)
print("B =", u.budget_B, "budget", budget_bound(u.s, u.gprime_order, 7))
print(verify_runge_unit(u))

# %% [markdown]
# The Cramer solution is not minimal. For the orbit set {infinity, big
# orbit} the hand-picked unit 1/w_(1/p,0) does the same job with B = 1.

# %%
auto = runge_unit(G, "full", [0, 2])
hand = runge_unit_from_exponents(G, "full", [0, 2], {(1, 0): -1})
print("automatic B =", auto.budget_B, " hand-built B =", hand.budget_B)
print(verify_runge_unit(hand).passed)

# %% [markdown]
# Asking for every orbit violates the Runge condition and is refused.

# %%
try:
    runge_unit(G, "full", [0, 1, 2])
except RungeConditionError as exc:
    print("refused:", exc)

# %% [markdown]
# A less symmetric example: the X_1-type group at level 8 over Q.

# %%
H = borel_unipotent(8)
orbits = galois_orbits(H, "full")
print(len(orbits), "orbits of sizes", [o.degree for o in orbits])
u = runge_unit(H, "full", [0, 1])
print(u.nonzero_exponents(), verify_runge_unit(u).passed)
