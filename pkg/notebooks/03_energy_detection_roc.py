# %% [markdown]
# # Energy detection over Nakagami-m fading
#
# An energy detector with time-bandwidth product `u` and threshold `lambda`
# has false-alarm probability `Q(u, lambda/2)` and, at SNR `gamma`, detection
# probability `Q_u(sqrt(2 gamma), sqrt(lambda))`. Averaging over Nakagami-m
# fading turns the detection probability into an F integral with
# `k = m`, `a = sqrt(2)`, `b = sqrt(lambda)` and `p = m / gbar`.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from marcum_integrals.applications import (
    EnergyDetector,
    NakagamiChannel,
    avg_prob_detection,
    avg_prob_detection_quadrature,
    db_to_linear,
    roc_curve,
    threshold_for_pf,
)

# %% [markdown]
# ## Closed form against direct averaging

# %%
gbar = db_to_linear(15.0)
for m in (1.0, 2.0, 3.5):
    det = EnergyDetector(5.0, threshold_for_pf(5.0, 0.01))
    ch = NakagamiChannel(m, gbar)
    print(m, avg_prob_detection(ch, det), avg_prob_detection_quadrature(ch, det))

# %% [markdown]
# ## Complementary ROC, u = 5 and mean SNR 15 dB
#
# Lighter fading (larger `m`) lowers the missed-detection probability at
# every false-alarm level.

# %%
pf_grid = np.logspace(-4, np.log10(0.99), 50)
fig, ax = plt.subplots()
for m in (0.5, 1.0, 2.0, 5.0):
    points = roc_curve(NakagamiChannel(m, gbar), 5.0, pf_grid)
    ax.loglog([pt.pf for pt in points], [pt.pmd for pt in points], label=f"m = {m:g}")
ax.set_xlabel("probability of false alarm")
ax.set_ylabel("probability of missed detection")
ax.legend()
fig.savefig("roc_u5_15db.png", dpi=120)
