# %% [markdown]
# # Max-min coefficients, bounds and madograms

# %%
import numpy as np

from evdmm import Logistic, Partition, closed_form_R, max_min_R, pairwise_madogram
from evdmm.coefficients import lambda_madogram_display

part = Partition([[0, 1], [2], [3]])
print("theta      R    lower  upper  closed form")
for theta in (0.1, 0.3, 0.5, 0.7, 0.9, 1.0):
    rep = max_min_R(Logistic(theta, 4), part)
    print(f"{theta:5}  {rep.R:.4f}  {rep.lower:.4f} {rep.upper:.4f}  {closed_form_R(Logistic(theta, 4), part):.4f}")

# %% [markdown]
# Every non-empty subset of blocks contributes an expected weighted maximum;
# the report keeps them keyed by bit mask.

# %%
rep = max_min_R(Logistic(0.5, 4), part, lam=[1.0, 0.5, 2.0])
for mask, value in rep.e_terms.items():
    blocks = [j + 1 for j in range(part.p) if mask >> j & 1]
    print(f"blocks {blocks}: {value:.5f}")
print("R =", round(rep.R, 6))

# %% [markdown]
# With two components and weights (w, 1 - w), half the coefficient is the
# lambda-madogram.

# %%
model = Logistic(0.4, 2)
for w in np.linspace(0.1, 0.9, 5):
    print(f"w={w:.1f}  madogram={pairwise_madogram(model, Partition.singletons(2), [w, 1 - w]):.6f}"
          f"  via l: {lambda_madogram_display(model, w):.6f}")
