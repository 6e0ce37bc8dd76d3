# %% [markdown]
# # Random-coding rate bounds
#
# For a fixed column-weight fraction p, the union-free part of the bound is
# the worst case over the overlap d0 of a bad pair, and the fast-decoding
# part is R2 = h(p) - d p h(1/d).  Both are maximised over p.

# %%
from uffd.bounds import bound_disjunctive, bound_eq, r1_profile, rate_r2

d, p = 3, 0.22
for r in r1_profile(d, p):
    print(f"d0={r.d0}  R1={r.value:.4f}  at {r.argmax}")
print(f"R2 = {rate_r2(d, p):.4f}")

# %% [markdown]
# Maximising over p (this takes a few seconds per d).

# %%
res = bound_eq(3, "uffd_eq")
print(f"rate {res.rate:.4f} at p = {res.p_opt:.3f}, beta = {res.beta:.3f}")
print(f"disjunctive: {bound_disjunctive(3).rate:.4f}")

# %% [markdown]
# The full set of tables is available from the command line:
#
#     uffd bounds table --d-min 2 --d-max 6 --format csv
