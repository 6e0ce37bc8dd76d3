# %% [markdown]
# # Large d with Bernoulli columns
#
# At p = ln 2 / d the bound behaves like 2 ln 2 / d**2.  The check below
# evaluates d**2 times the bound for growing d.

# %%
import math

from uffd.bounds import asymptotic_check

rep = asymptotic_check((10, 50, 200, 1000))
for row in rep.rows:
    print(f"d={row['d']:5d}  d^2 R = {row['scaled_rate']:.4f}  beta/d = {row['beta_over_d']:.4f}")
print("limit", 2 * math.log(2), "approaching:", rep.ok)
