# %% [markdown]
# # Marcum Q and the special-function kernels
#
# The integrals in this package are built on the generalized Marcum
# Q-function, regularized incomplete gamma functions, Kummer's 1F1 and the
# Humbert double series. This script checks each kernel against an
# independent reference.

# %%
import math

from scipy import special, stats

from marcum_integrals.marcum import marcum_q, marcum_q_bessel_oracle, marcum_q_zero_a
from marcum_integrals.specfun import humbert_phi1, humbert_phi2, kummer_1f1, reg_upper

# %% [markdown]
# ## Marcum Q as a Poisson mixture
#
# `Q_m(a, b)` is the probability that a non-central chi-square variable with
# `2m` degrees of freedom and noncentrality `a^2` exceeds `b^2`, so scipy's
# `ncx2.sf` gives an independent reference.

# %%
for m, a, b in [(1, 1, 1), (2.5, 3, 2), (0.5, 0.2, 4), (8, 6, 7)]:
    ours = marcum_q(m, a, b)
    ref = stats.ncx2.sf(b * b, 2 * m, a * a)
    quad = marcum_q_bessel_oracle(m, a, b)
    print(f"Q_{m}({a}, {b}) = {ours:.15f}  ncx2 {ref:.15f}  Bessel integral {quad:.15f}")

# %% [markdown]
# With `a = 0` and integer order the function collapses to a finite sum.

# %%
print(marcum_q_zero_a(4, 1.5), marcum_q(4, 0.0, 1.5), reg_upper(4, 0.5 * 1.5 ** 2))

# %% [markdown]
# ## Kummer 1F1 for negative arguments
#
# Direct summation of 1F1 with large negative argument cancels badly; the
# Kummer transform keeps every term positive.

# %%
for a, c, z in [(2.5, 3.5, -20.0), (-3.2, 1.5, -4.0), (1.0, 2.0, 1.0)]:
    print(a, c, z, kummer_1f1(a, c, z), special.hyp1f1(a, c, z))

# %% [markdown]
# ## Humbert series
#
# `Phi1(k, 1, 1; x, 0) = (1 - x)^(-k)` and `Phi2(1, b, 1; x, 0) = e^x` give
# quick sanity values.

# %%
print(humbert_phi1(2.0, 1.0, 1.0, 0.5, 0.0), (1 - 0.5) ** -2)
print(humbert_phi2(1.0, 4.2, 1.0, 0.8, 0.0), math.exp(0.8))
print(humbert_phi1(1.7, 1.0, 1.0, 0.4, 0.9), humbert_phi2(1.0, 2.5, 1.0, 0.6, 1.2))
