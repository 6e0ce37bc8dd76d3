# %% [markdown]
# # Code matrices and their properties
#
# Rows are tests, columns are items. A test is positive when it contains at
# least one defective item, so the outcome is the Boolean sum of the
# defective columns.

# %%
from uffd import CodeMatrix, outcome_for_set
from uffd.verify import check_structure_props, cover_cap_ok, is_disjunctive, is_ssm, is_uffd, is_union_free

I9 = CodeMatrix.identity(9)
print(I9.to_text())
print("outcome of {2, 5}:", outcome_for_set(I9, [2, 5]).to_text().strip())

# %% [markdown]
# Individual testing is trivially union-free. With 9 items and d = 2 every
# outcome covers at most floor(sqrt 9) = 3 columns, so it also meets the
# fast-decoding cap.

# %%
for name, rep in [
    ("disjunctive", is_disjunctive(I9, 2)),
    ("uf_le", is_union_free(I9, 2, "le")),
    ("cover cap", cover_cap_ok(I9, 2, "le")),
    ("uffd_le", is_uffd(I9, 2, "le")),
]:
    print(f"{name:12s} {rep.holds}")

# %% [markdown]
# A column that is the OR of two others breaks everything, and each
# failing check hands back a counterexample.

# %%
bad = CodeMatrix.from_columns(["100", "010", "110"])
print(is_union_free(bad, 2).witness)
print(is_disjunctive(bad, 2).witness)
print(is_ssm(bad, 2).witness)

# %% [markdown]
# The implications among the families, evaluated on one matrix.  The
# "disjunctive => uffd" links only hold once n >= d**d.

# %%
rep = check_structure_props(CodeMatrix.identity(5), 2)
for k, v in rep.assertions.items():
    print(f"{v!s:5s} {k}")
