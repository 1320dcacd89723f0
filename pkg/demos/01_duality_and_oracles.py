# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Four ways to read off t
#
# A digital net is described by its generating matrices. Its quality parameter
# can be found from the dual space (minimum weight), from the rank condition on
# rows of the generating matrices, by counting points in boxes, or from the
# Walsh spectrum of the point set. All four must agree.

# %%
import numpy as np

from hon_forge import gf, nets, walsh

F2 = gf.make_field(2)
net = nets.interlace(nets.pascal_net(2, 2, 2), 2)
print(net.params)
print(net.matrices[0])

# %% [markdown]
# The dual space and its minimum weight.

# %%
D = nets.dual_space(net)
print("dual dimension", D.dim)
print("minimum weight", nets.min_mu_distance(D, 2, 100))
print("strict t", nets.strict_t(net))

# %% [markdown]
# The other three routes, as the smallest t each one accepts.

# %%
P = nets.generate_points(net)
L = net.params.floor_beta_n
by_rank = min(t for t in range(L + 1) if nets.verify_net_definition(net, t))
by_boxes = min(t for t in range(L + 1) if walsh.verify_net_geometric(P, t, 2, 1, net.n, net.m))
by_walsh = walsh.general_strict_t(P, 2, 1, net.n, net.m)
print(by_rank, by_boxes, by_walsh)

# %% [markdown]
# The same comparison on a batch of random nets over F_3.

# %%
rng = np.random.default_rng(0)
F3 = gf.make_field(3)
rows = []
for _ in range(20):
    alpha = int(rng.integers(1, 3))
    s, n = 2, int(rng.integers(1, 4))
    m = int(rng.integers(-(-n // alpha), s * n + 1))
    net = nets.DigitalNet.from_matrices(F3, rng.integers(0, 3, (s, n, m)), alpha=alpha)
    P = nets.generate_points(net)
    L = net.params.floor_beta_n
    rows.append((
        nets.strict_t(net),
        min(t for t in range(L + 1) if nets.verify_net_definition(net, t)),
        min(t for t in range(L + 1) if walsh.verify_net_geometric(P, t, alpha, 1, n, m)),
        walsh.general_strict_t(P, alpha, 1, n, m),
    ))
print(all(len(set(r)) == 1 for r in rows), rows[:5])
