# %% [markdown]
# # Explicit height bounds
#
# All bounds are evaluated with outward rounding, so each printed float is a
# genuine upper bound. Reports carry the three error terms that add up to
# the final bound.

# %%
from __future__ import annotations

import json

from runge_kit import bounds

print(bounds.bound_theorem_1_1(5, 16))
print(bounds.bound_theorem_1_2(5, 16, 2))
print(bounds.bound_refined(5, 8, 2))

# %% [markdown]
# The general bound is the refined one with B replaced by the exponent
# budget of the Runge unit; the identity is exact in the rational parts.

# %%
a = bounds.refined_with_budget_exact(5, 8, 2)
b = bounds.theorem_1_2_exact(5, 16, 2)
print(a == b, a)

# %%
print(json.dumps(bounds.report_theorem_1_2(5, 16, 2).to_json(), indent=2))

# %% [markdown]
# Split Cartan curves: one rational cusp in the orbit set gives 24p log 3p,
# both rational cusps give 72 log 3p.

# %%
for p in (3, 5, 7, 11, 13):
    print(p, round(bounds.bound_split_cartan(p), 2), round(bounds.bound_split_cartan(p, "6.6"), 2))

# %% [markdown]
# Transporting the split Cartan bound along an isogeny of degree p lands
# below 110 p log p. The margin shrinks for small p and grows afterwards.

# %%
for p in (3, 5, 7, 101, 1009, 9973):
    print(p, round(bounds.x0_plus_chain(p) / bounds.bound_x0_plus(p), 4))
