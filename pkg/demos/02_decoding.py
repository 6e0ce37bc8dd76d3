# %% [markdown]
# # Decoding
#
# COMP keeps every column covered by the outcome.  DD keeps the candidates
# that are alone in some positive test.  The two-step decoder searches
# subsets of the COMP candidates only, which on a UFFD code is at most n
# subset checks.

# %%
from uffd import CodeMatrix, outcome_for_set
from uffd.decode import brute_uf_decode, comp_decode, dd_decode, simulate_trials, uffd_decode
from uffd.ensembles import EnsembleSpec, construct

C = CodeMatrix.from_columns(["1100", "0011", "0110"])
r = outcome_for_set(C, [1, 2])
print("COMP:", comp_decode(C, r))
print("DD:  ", dd_decode(C, r))

# %% [markdown]
# On a random (<=2)-UFFD code the two-step decoder agrees with brute force
# but does far less work.

# %%
code = construct(EnsembleSpec(t=30, n_initial=40, p=0.31, d=2, target="uffd_le"))
print(code.shape)
r = outcome_for_set(code, [4, 17])
fast = uffd_decode(code, r, 2, "le")
slow = brute_uf_decode(code, r, 2, "le")
print(fast.defectives, fast.subset_evaluations, "subset checks")
print(slow.defectives, slow.subset_evaluations, "subset checks")

# %%
summary = simulate_trials(code, 2, "le", trials=2000, seed=0)
print(summary.to_dict())
