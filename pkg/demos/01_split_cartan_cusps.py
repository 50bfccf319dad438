# %% [markdown]
# # Cusps and Siegel units on the split Cartan curve
#
# The diagonal subgroup of GL2(F_p) has p + 1 cusps, all of width p. Over Q
# they fall into three Galois orbits: two rational cusps and one orbit of
# size p - 1. We compute all of this from the group alone.

# %%
from __future__ import annotations

from runge_kit.cusps import galois_orbits, geometric_cusps
from runge_kit.exactmath import rank
from runge_kit.gl2 import UnitLabel, split_cartan
from runge_kit.units import div_w, divisor_matrix

p = 5
G = split_cartan(p)
print(G)

# %% [markdown]
# Cusps are +- classes of primitive row vectors mod p. The first entry is the
# cusp at infinity, (0, 1); the second is (1, 0).

# %%
for i, gc in enumerate(geometric_cusps(G)):
    print(i, gc.representative.vector, "width", gc.width)

orbits = galois_orbits(G, "full")
print("orbits:", [o.members for o in orbits])

# %% [markdown]
# The units w_a are products of u_a over the Galois-fixing part of G. Their
# divisors are exact integers; the two generators mirror each other under
# swapping the rational cusps.

# %%
for a in (UnitLabel(p, 1, 0), UnitLabel(p, 0, 1)):
    print(a.as_fractions(), div_w(a, G, "full").coefficients)

# %% [markdown]
# The whole divisor matrix (one row per orbit, one column per label class)
# has rank equal to the number of orbits minus one.

# %%
M = divisor_matrix(G, "full")
print(M.rows, "x", M.cols, "rank", rank(M))

# %% [markdown]
# The same numbers for a few more primes, compared with the closed form
# -p(p-1)^2/2 at every cusp except (1, 0), where it is p times larger with
# the opposite sign.

# %%
for q in (3, 7, 11, 13):
    d = div_w(UnitLabel(q, 1, 0), split_cartan(q), "full").coefficients
    print(q, d[:3], "...", -q * (q - 1) ** 2 // 2)
