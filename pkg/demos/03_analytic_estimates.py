# %% [markdown]
# # Near infinity: j and Siegel functions
#
# The height bounds rest on a few explicit inequalities for j(tau) and
# log|g_a(tau)| on the fundamental domain. Here we evaluate both functions
# from their q-expansions and sample the inequalities.

# %%
from __future__ import annotations

import math

import numpy as np

from runge_kit import analytic
from runge_kit.gl2 import UnitLabel

print(analytic.eval_j(1j))
print(analytic.eval_j(complex(-0.5, math.sqrt(3) / 2)))

# %% [markdown]
# The remainder j - 1/q - 744 is summed from exact integer Fourier
# coefficients, so it does not lose digits to cancellation. The ratio
# against |q| approaches 196884 at infinity and grows towards |q| = 0.005.

# %%
print(analytic.j_coefficients(5))
for im in (10.0, 2.0, 1.0, math.log(200) / (2 * math.pi)):
    print(f"im={im:.3f}  ratio={analytic.prop_j_ratio(1j * im):.1f}")

# %%
rep = analytic.check_prop_j(10_000, seed=42)
print(rep.worst_value, rep.passed, rep.worst_witness)

# %%
rep = analytic.check_cor_j(10_000, seed=42)
print(rep.passed, rep.details)

# %% [markdown]
# For Siegel functions the deviation log|g_a| - ell_a log|q| stays below
# log N on the fundamental domain for N >= 3. The worst labels are not
# always the (0, k/N) ones.

# %%
for N in (3, 5, 7, 12, 30):
    r = analytic.check_siegel_D(N, 1000, seed=N)
    print(N, round(r.worst_value, 4), r.worst_witness["label"])

# %% [markdown]
# N = 2 is the exception: at tau = i with a = (0, 1/2) the deviation is
# log 2 + 2 sum log(1 + q^n), a little above log 2.

# %%
dev = analytic.siegel_deviation(UnitLabel(2, 0, 1), 1j)
print(dev, math.log(2), dev - math.log(2))

# %% [markdown]
# Away from the fundamental domain the bound involves j, and the evaluation
# goes through a reduction tau -> gamma tau with the label moved by gamma^-1.

# %%
tau = complex(0.31, 0.07)
z, g = analytic.reduce_to_D(tau)
print(z, g)
r = analytic.check_siegel_global(7, 2000, seed=1)
print(r.passed, r.worst_value)

grid = np.linspace(1.0, 3.0, 5)
print([round(analytic.siegel_deviation(UnitLabel(7, 0, 3), 1j * t), 6) for t in grid])
