# %% [markdown]
# # Closed forms against quadrature
#
# `G(k,m,a,b,p) = int x^{k-1} Q_m(a, b sqrt x) e^{-px} dx` and
# `F(k,m,a,b,p) = int x^{k-1} Q_m(a sqrt x, b) e^{-px} dx` each have several
# closed forms with different validity regions. Here every form is compared
# with adaptive Gauss-Kronrod quadrature of the defining integral.

# %%
import itertools
import math

from marcum_integrals import Family, IntegralSpec, evaluate
from marcum_integrals.integrals import (
    eval_f_eq15,
    eval_f_k1,
    eval_f_thm3,
    eval_g_thm1,
    eval_g_thm2,
)
from marcum_integrals.oracle import oracle_f, oracle_g

# %% [markdown]
# ## One point per evaluator

# %%
cases = [
    ("Thm1 (integer m)", eval_g_thm1, oracle_g, Family.G, (2.5, 2, 1.0, 1.5, 0.8)),
    ("Thm2 (integer k)", eval_g_thm2, oracle_g, Family.G, (2, 0.8, 0.5, 1.0, 1.0)),
    ("Eq15 (integer k)", eval_f_eq15, oracle_f, Family.F, (3, 1.4, 0.8, 1.1, 0.9)),
    ("Thm3 (integer m)", eval_f_thm3, oracle_f, Family.F, (1.75, 2, 1.3, 1.6, 0.7)),
]
for name, closed, quad, family, args in cases:
    value = closed(*args)
    ref = quad(IntegralSpec(family, *args)).value
    print(f"{name:18s} {value:.15f}  quadrature {ref:.15f}  rel diff {abs(value / ref - 1):.1e}")
print("Lemma1 (k = 1)    ", eval_f_k1(1.5, 1.0, 2.0, 0.5),
      oracle_f(IntegralSpec(Family.F, 1, 1.5, 1.0, 2.0, 0.5)).value)

# %% [markdown]
# ## The dispatcher
#
# `evaluate` picks the finite-sum forms first, then the Humbert-series forms,
# and falls back to quadrature when no closed form applies or when the
# subtraction `Gamma(k)/p^k - ...` would lose too many digits.

# %%
for family, args in [(Family.G, (2, 1.5, 1, 0, 1)), (Family.F, (2, 1.5, 1, 1, 1)),
                     (Family.F, (1.3, 1.7, 1, 1, 1)), (Family.G, (8, 1, 0.5, 6, 0.2))]:
    out = evaluate(IntegralSpec(family, *args))
    print(family.value, args, out.method.value, out.value, "fallback from", out.fallback_from)

# %% [markdown]
# ## Conditioning of the subtractive forms
#
# For large `k`, large `b` and small `p` the result is a tiny difference of
# two large numbers. The two G theorems then agree only to roughly
# `eps * Gamma(k) / (p^k G)`.

# %%
for k, m, a, b, p in itertools.product([2, 5], [1, 4], [0.5], [1.5, 3.0], [0.3, 4.0]):
    t1, t2 = eval_g_thm1(k, m, a, b, p), eval_g_thm2(k, m, a, b, p)
    cond = math.gamma(k) / p ** k / t2
    print(f"k={k} m={m} b={b} p={p}: condition {cond:8.1e}  |Thm1/Thm2 - 1| = {abs(t1 / t2 - 1):.1e}")
