# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Strength tables for q = 5
#
# The direct construction interlaces a classical net of twice the dimension.
# The concatenation rule splits the dimension and the precision between two
# outer nets over F_25 and joins them with a Reed-Solomon chain.

# %%
from hon_forge import tables

params = tables.bundled_param_table()
for s in (5, 15, 25):
    rows = tables.render_table(5, s, range(15, 31), ("dir", "xv"), params)
    print(f"s = {s}")
    print(tables.format_sigma_tsv(rows, ("dir", "xv")))

# %% [markdown]
# The best split for one cell, and what the fallback table (t' = 0 whenever
# s <= q) gives on its own.

# %%
print(tables.sigma_xv(5, 30, 25, params))
print(tables.sigma_xv(5, 30, 25, tables.ParamTable({})))
