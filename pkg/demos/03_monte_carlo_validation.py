# %% [markdown]
# # Checking exact values against simulation
#
# Samples come from a seeded counter-based generator, so reruns are identical.

# %%
import numpy as np

from evdmm import Logistic, Partition, SimulationSpec, estimate_R, max_min_R, sample
from evdmm.tail_models import random_m4

for theta in (0.3, 0.5, 0.8):
    model = Logistic(theta, 3)
    part = Partition.singletons(3)
    exact = max_min_R(model, part).R
    print(f"theta={theta}: exact {exact:.4f}")
    for n in (500, 5_000, 50_000):
        est = estimate_R(sample(SimulationSpec(model, n, seed=1)), part).R_hat
        print(f"   n={n:>6}  estimate {est:.4f}  gap {abs(est - exact):.4f}")

# %% [markdown]
# Moving-maxima models work the same way.

# %%
model = random_m4(np.random.default_rng(3), 5, 6)
part = Partition([[0, 1], [2, 3], [4]])
lam = [0.5, 1.0, 2.0]
exact = max_min_R(model, part, lam).R
est = estimate_R(sample(SimulationSpec(model, 100_000, seed=2)), part, lam).R_hat
print(f"M4: exact {exact:.4f}, estimate {est:.4f}")
