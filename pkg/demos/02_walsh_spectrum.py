# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Walsh spectra and box counts
#
# Spectrum entries are sums of b-th roots of unity. They are kept exactly, as a
# count per exponent class, so zero tests involve no rounding.

# %%
import numpy as np

from hon_forge import walsh
from hon_forge.walsh import ExpMatrix, PointSet

P = PointSet(3, np.array([[[0]], [[0]], [[1]]]))
spec = walsh.dual_vector(P, 1)
print(spec.to_tsv())

# %% [markdown]
# The Walsh matrix times its conjugate is b^{sr} times the identity.

# %%
b, s, r = 3, 2, 1
W = ExpMatrix.from_exponents(b, walsh.walsh_matrix(b, s, r))
eye = ExpMatrix.from_ints(b, np.eye(b ** (s * r), dtype=np.int64) * b ** (s * r))
print((W @ W.conj()).equals(eye))

# %% [markdown]
# Spectrum C and box counts M are related by C = W M and b^{sr} M = W* C.
# Putting the conjugate on the other side works only in base 2, where W is real.

# %%
C = spec.as_matrix()
M = ExpMatrix.from_ints(3, walsh.point_vector(P, 1).counts)
W1 = ExpMatrix.from_exponents(3, walsh.walsh_matrix(3, 1, 1))
print("C = W M:", C.equals(W1 @ M))
print("3 M = W* C:", (W1.conj() @ C).equals(M * 3))
print("C = W* M:", C.equals(W1.conj() @ M))

# %% [markdown]
# The counts can be recovered from the spectrum.

# %%
back = walsh.reconstruct_points(spec)
print(sorted(back.digits.reshape(-1).tolist()))
