# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Concatenating nets along a code chain
#
# Outer nets over F_{q^e} are combined through a nested chain of inner codes
# over F_q. The result is a net over F_q whose t is bounded by the chain's
# distances.

# %%
from hon_forge import bz, nets

chain = bz.rs_chain(5, 5, (0, 2, 4))
print("inner distances", chain.deltas, "levels", chain.e)

outer = [nets.interlace(nets.pascal_net(25, 2, 2), 2), nets.interlace(nets.pascal_net(25, 6, 4), 2)]
for net in outer:
    print(net.params)

# %% [markdown]
# The chain reaches only 4 of the 5 inner positions. By default the last
# position is kept, as if a zero outer space sat on it.

# %%
kept = bz.rule_xv(chain, outer)
print(kept.params)

# %% [markdown]
# Dropping that position gives a much smaller net with the same declared t,
# but that t is not guaranteed. A two-position chain over F_2 shows it.

# %%
import numpy as np

from hon_forge.gf import make_field

F2 = make_field(2)
small = bz.CodeChain(F2, 2, (0, 1), [[1, 1]])
net = nets.DigitalNet.from_matrices(F2, [[[1, 0], [0, 1], [0, 0], [0, 0]]], t=2, alpha=2)
dropped = bz.rule_xv(small, [net], unserved="delete")
print("declared", dropped.params.t, "actual", nets.strict_t(dropped))
kept_small = bz.rule_xv(small, [net])
print("declared", kept_small.params.t, "actual", nets.strict_t(kept_small))
