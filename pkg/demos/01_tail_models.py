# %% [markdown]
# # Tail dependence functions
#
# Each model is a function `l` on `[0, inf)^d`.  It sits between `max(x)`
# (total dependence) and `sum(x)` (independence), and its value at an
# indicator vector is the extremal coefficient of that sub-vector.

# %%
import numpy as np

from evdmm import (
    Comonotone,
    Independence,
    Logistic,
    M4,
    Partition,
    eval_tail,
    extremal_coefficient,
    make_block_independent,
)

x = np.array([0.2, 0.5, 0.3])
for model in [Comonotone(3), Logistic(0.3, 3), Logistic(0.7, 3), Independence(3)]:
    print(f"{model.family:>13} {getattr(model, 'theta', ''):>4}  l(x) = {eval_tail(model, x):.6f}")

# %% [markdown]
# Extremal coefficients of the full vector move from 1 to d as theta goes from 0 to 1.

# %%
for theta in (0.05, 0.25, 0.5, 0.75, 1.0):
    print(f"theta={theta:4}  eps={extremal_coefficient(Logistic(theta, 4), range(4)):.4f}")

# %% [markdown]
# A moving-maxima model on a finite signature set.  Rows are signatures and
# columns components; each column sums to one.

# %%
alpha = np.array([
    [0.6, 0.0, 0.3],
    [0.4, 0.5, 0.0],
    [0.0, 0.5, 0.7],
])
m4 = M4(alpha)
print("pair extremal coefficients:",
      {f"{i + 1}{j + 1}": round(extremal_coefficient(m4, [i, j]), 3)
       for i in range(3) for j in range(i + 1, 3)})

# %% [markdown]
# Making blocks independent keeps each block's law and adds up the block
# extremal coefficients.

# %%
hat = make_block_independent(Logistic(0.5, 3), Partition([[0, 1], [2]]))
print("block-independent eps over all three:", extremal_coefficient(hat, range(3)))
print("model descriptor:", hat.to_dict())
