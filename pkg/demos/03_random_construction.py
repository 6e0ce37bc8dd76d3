# %% [markdown]
# # Random codes with purification
#
# Draw columns uniformly among the weight floor(p t) columns, then delete
# one column from each colliding pair and from each outcome that covers too
# many columns.

# %%
import numpy as np

from uffd.ensembles import EnsembleSpec, construct, purify, random_matrix
from uffd.verify import is_uffd

spec = EnsembleSpec(t=30, n_initial=40, p=0.31, d=2, target="uffd_le")
raw = random_matrix(spec)
print("column weights:", set(raw.weights()))
print("raw matrix is (<=2)-UFFD:", is_uffd(raw, 2, "le").holds)

clean = purify(raw, 2, "le")
print("kept", clean.n, "of", raw.n, "columns;", is_uffd(clean, 2, "le").holds)

# %% [markdown]
# How many columns survive across seeds.

# %%
kept = []
for seed in range(20):
    C = construct(EnsembleSpec(t=30, n_initial=40, p=0.31, d=2, target="uffd_le", seed=seed, max_retries=0))
    kept.append(C.n)
print(kept, "mean", np.mean(kept))

# %% [markdown]
# The Bernoulli ensemble drops every column whose weight is off.

# %%
b = construct(EnsembleSpec(t=30, n_initial=60, p=0.31, d=2, kind="bernoulli", target="uffd_eq"))
print(b.shape, set(b.weights()))
