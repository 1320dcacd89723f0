"""Blokh-Zyablov concatenation of linear spaces and the resulting net propagation rule.

An inner chain ``{0} = N'_0 < N'_1 < ... < N'_r <= F_q^{s'}`` with a basis
``v_1..v_k`` adapted to the chain is combined with outer spaces ``N_u`` over
``F_{q^{e_u}}``, ``e_u = dim N'_u - dim N'_{u-1}``.  Each outer symbol is
expanded over F_q and mapped onto the span of the level-u basis vectors, so
one outer coordinate becomes s' inner positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from hon_forge.gf import GF, expand_symbol, field_of_order, make_field, null_space, rank, row_reduce
from hon_forge.nets import DigitalNet, LinearSpace, NetParams, _all_combinations, dual_space

__all__ = [
    "CodeChain",
    "rs_chain",
    "read_chain",
    "write_chain",
    "min_hamming_distance",
    "pad_depth",
    "combine",
    "rule_xv",
    "xv_bound",
]

HAMMING_ENUM_MAX = 2**20


def min_hamming_distance(field: GF, basis: np.ndarray) -> int | None:
    """Minimum Hamming weight of a nonzero codeword, by listing the whole code."""
    basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
    if basis.shape[0] == 0:
        return None
    if field.q ** basis.shape[0] > HAMMING_ENUM_MAX:
        raise ValueError(f"code of size {field.q}^{basis.shape[0]} too large to enumerate")
    words = _all_combinations(field, basis)
    weights = np.count_nonzero(words, axis=1)
    return int(weights[weights > 0].min())


def _chain_echelon(field: GF, basis: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Adapt the basis so v_i vanishes at the pivots of v_1..v_{i-1}.

    Each v_i is reduced only by earlier vectors, so every prefix spans the same
    space as before.  Returns the new basis and the pivot columns in order.
    """
    rows, pivots = [], []
    for v in basis:
        v = np.array(v, dtype=np.int64)
        for w, pc in zip(rows, pivots):
            if v[pc]:
                v = field.sub(v, field.mul(int(v[pc]), w))
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            raise ValueError("chain basis vectors are linearly dependent")
        pc = int(nz[0])
        rows.append(field.mul(v, field.inv(int(v[pc]))))
        pivots.append(pc)
    return np.array(rows, dtype=np.int64).reshape(len(rows), -1), pivots


@dataclass
class CodeChain:
    """Nested linear codes in F_q^{s'} with a triangular chain-adapted basis.

    Inner positions are reordered so that basis vector i has its pivot at
    position i and zeros before it; ``position_order[i]`` is the original
    position now in place i.
    """

    field: GF
    s_prime: int
    dims: tuple[int, ...]
    basis: np.ndarray
    deltas: tuple[int, ...] = ()
    position_order: tuple[int, ...] = ()

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if self.dims[0] != 0 or any(a >= b for a, b in zip(self.dims, self.dims[1:])):
            raise ValueError(f"chain dims {self.dims} must start at 0 and strictly increase")
        if self.dims[-1] > self.s_prime:
            raise ValueError("chain dimension exceeds the inner length")
        basis = np.asarray(self.basis, dtype=np.int64).reshape(-1, self.s_prime)
        if basis.shape[0] != self.dims[-1]:
            raise ValueError(f"need {self.dims[-1]} basis rows, got {basis.shape[0]}")
        if not self.position_order:
            basis, pivots = _chain_echelon(self.field, basis)
            order = pivots + [c for c in range(self.s_prime) if c not in pivots]
            self.basis = basis[:, order]
            self.position_order = tuple(order)
        else:
            self.basis = basis
        k = self.basis.shape[0]
        square = self.basis[:, :k]
        if np.any(np.tril(square, -1)) or np.any(np.diag(square) == 0):
            raise ValueError("basis is not triangular in the given position order")
        if not self.deltas:
            self.deltas = tuple(
                min_hamming_distance(self.field, self.basis[:d]) for d in self.dims[1:]
            )
        elif len(self.deltas) != self.r:
            raise ValueError("one distance per chain level required")

    @property
    def r(self) -> int:
        return len(self.dims) - 1

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def e(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.dims, self.dims[1:]))

    def level_of(self, position: int) -> int | None:
        """Chain level (0-based) whose vectors start at this 0-based inner position."""
        for u in range(self.r):
            if self.dims[u] <= position < self.dims[u + 1]:
                return u
        return None

    def level_vectors(self, u: int) -> np.ndarray:
        return self.basis[self.dims[u] : self.dims[u + 1]]

    def verify_distances(self) -> bool:
        return all(
            min_hamming_distance(self.field, self.basis[:d]) == delta
            for d, delta in zip(self.dims[1:], self.deltas)
        )


def rs_chain(q: int, s_prime: int, dims: Sequence[int]) -> CodeChain:
    """Nested Reed-Solomon codes evaluated at the first s' field elements."""
    F = field_of_order(q)
    if s_prime > q:
        raise ValueError(f"s'={s_prime} exceeds q={q}")
    dims = tuple(dims)
    k = dims[-1]
    basis = np.array([[F.pow(g, j) for g in range(s_prime)] for j in range(k)], dtype=np.int64)
    if all(F.q**d <= HAMMING_ENUM_MAX for d in dims[1:]):
        return CodeChain(F, s_prime, dims, basis.reshape(k, s_prime))
    deltas = tuple(s_prime + 1 - d for d in dims[1:])
    return CodeChain(F, s_prime, dims, basis.reshape(k, s_prime), deltas=deltas)


def write_chain(chain: CodeChain, path: str | Path | None = None) -> str:
    lines = [f"{chain.q} {chain.s_prime} {chain.r}", " ".join(map(str, chain.dims))]
    # rows go out in the original position order
    restore = np.argsort(chain.position_order)
    lines.extend(" ".join(str(int(x)) for x in row[restore]) for row in chain.basis)
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def read_chain(path: str | Path) -> CodeChain:
    rows = [line.split() for line in Path(path).read_text().splitlines() if line.strip()]
    if len(rows) < 2 or len(rows[0]) != 3:
        raise ValueError("chain file must start with 'q s_prime r' and the dims line")
    q, s_prime, r = (int(x) for x in rows[0])
    dims = tuple(int(x) for x in rows[1])
    if len(dims) != r + 1:
        raise ValueError(f"expected {r + 1} chain dims, got {len(dims)}")
    basis = np.array(rows[2:], dtype=np.int64).reshape(-1, s_prime) if rows[2:] else np.zeros((0, s_prime))
    return CodeChain(field_of_order(q), s_prime, dims, basis)


# -- outer spaces -------------------------------------------------------------


def pad_depth(space: LinearSpace, target_n: int) -> LinearSpace:
    """Extend every coordinate to ``target_n`` digits, leaving the new deep digits free."""
    n, s = space.n, space.s
    if target_n < n:
        raise ValueError(f"target depth {target_n} below current depth {n}")
    if target_n == n:
        return space
    old = space.basis.reshape(-1, s, n)
    top = np.zeros((old.shape[0], s, target_n), dtype=np.int64)
    top[:, :, :n] = old
    deep = np.zeros((s * (target_n - n), s, target_n), dtype=np.int64)
    for idx, (j, d) in enumerate((j, d) for j in range(s) for d in range(n, target_n)):
        deep[idx, j, d] = 1
    basis = np.concatenate([top, deep]).reshape(-1, s * target_n)
    return LinearSpace(space.field, s, target_n, basis)


def _base_field(chain: CodeChain, u: int) -> GF:
    return make_field(chain.field.p, chain.field.e * chain.e[u])


def _kept_columns(chain: CodeChain, widths: Sequence[int], unserved: str) -> list[tuple[int, int]]:
    """(outer slot a, inner position i), both 0-based, in output order."""
    s = max(widths)
    cols = []
    for a in range(s):
        for i in range(chain.s_prime):
            u = chain.level_of(i)
            if u is None:
                if unserved == "delete":
                    continue
            elif a < s - widths[u]:
                continue
            cols.append((a, i))
    return cols


def combine(chain: CodeChain, outers: Sequence[LinearSpace], unserved: str = "keep") -> LinearSpace:
    """The concatenated space ``{sum_u phi_u(x_u)}`` over F_q.

    Outer space u is embedded at the last ``s_u`` of ``s = max s_u`` slots.
    Inner positions beyond the chain's top dimension are kept with
    ``unserved="keep"``, as if served by a zero outer space of full width; this
    preserves the distance bound.  ``unserved="delete"`` drops them instead.
    """
    if unserved not in ("keep", "delete"):
        raise ValueError("unserved must be 'keep' or 'delete'")
    if len(outers) != chain.r:
        raise ValueError(f"chain has {chain.r} levels but {len(outers)} outer spaces were given")
    depths = {sp.n for sp in outers}
    if len(depths) != 1:
        raise ValueError(f"outer spaces have different depths {sorted(depths)}; pad them first")
    n = depths.pop()
    widths = [sp.s for sp in outers]
    if any(a > b for a, b in zip(widths, widths[1:])):
        raise ValueError(f"outer widths {widths} must be nondecreasing")
    s = widths[-1]
    Fq, sp_ = chain.field, chain.s_prime
    cols = _kept_columns(chain, widths, unserved)
    out_rows = []
    for u, space in enumerate(outers):
        big = _base_field(chain, u)
        if space.field.q != big.q:
            raise ValueError(f"outer space {u + 1} must be over {big}, got {space.field}")
        e_u = chain.e[u]
        V = chain.level_vectors(u)  # (e_u, s')
        theta = big.p if big.e > Fq.e else 1
        scalars = [big.pow(theta, l) for l in range(e_u)]
        for vec in space.basis:
            for c in scalars:
                x = big.mul(c, vec).reshape(space.s, n)
                full = np.zeros((s, n), dtype=np.int64)
                full[s - space.s :] = x
                y = expand_symbol(big, Fq, full)  # (s, n, e_u)
                inner = np.zeros((s, n, sp_), dtype=np.int64)
                for l in range(e_u):
                    inner = Fq.add(inner, Fq.mul(y[..., l : l + 1], V[l][None, None, :]))
                # inner[a, tau, i] -> column (a, i), digit tau
                row = np.stack([inner[a, :, i] for a, i in cols])
                out_rows.append(row.reshape(-1))
    L = len(cols) * n
    basis = np.array(out_rows, dtype=np.int64).reshape(-1, L)
    return LinearSpace(Fq, len(cols), n, basis)


# -- propagation rule ---------------------------------------------------------


def xv_bound(chain: CodeChain, params: Sequence[NetParams], beta: Fraction, n: int, active: Sequence[bool]) -> int:
    """Declared t: floor(beta n) + 1 - min_u (floor(beta_u n_u) - t_u + 1) delta'_u, clamped at 0."""
    terms = [
        (p.floor_beta_n - p.t + 1) * d for p, d, on in zip(params, chain.deltas, active) if on
    ]
    L = math.floor(beta * n)
    if not terms:
        return 0
    return max(0, min(L, L + 1 - min(terms)))


def rule_xv(
    chain: CodeChain, nets: Sequence[DigitalNet], alpha: int | None = None, unserved: str = "keep"
) -> DigitalNet:
    """Combine digital nets over F_{q^{e_u}} into one digital net over F_q.

    The duals of the input nets are padded to the common depth sum(e_u n_u),
    concatenated along the chain, and the output net is generated by a basis
    of the orthogonal complement.
    """
    if len(nets) != chain.r:
        raise ValueError(f"chain has {chain.r} levels but {len(nets)} nets were given")
    alpha = max(net.params.alpha for net in nets) if alpha is None else alpha
    e = chain.e
    for u, net in enumerate(nets):
        if net.q != chain.q ** e[u]:
            raise ValueError(f"net {u + 1} must be over F_{chain.q ** e[u]}, got F_{net.q}")
        if net.params.alpha > alpha:
            raise ValueError(f"net {u + 1} has alpha={net.params.alpha} > {alpha}")
        if rank(net.field, net.stacked()) < net.m:
            raise ValueError(f"net {u + 1} has linearly dependent generating rows")
    n = sum(eu * net.n for eu, net in zip(e, nets))
    duals = [pad_depth(dual_space(net), n) for net in nets]
    combined = combine(chain, duals, unserved=unserved)
    s = combined.s
    F = chain.field
    comp = null_space(F, combined.basis) if combined.dim else np.eye(s * n, dtype=np.int64)
    m = comp.shape[0]
    extra = 0 if unserved == "delete" else (chain.s_prime - chain.dims[-1]) * max(net.s for net in nets) * n
    expected = sum(eu * net.m for eu, net in zip(e, nets)) + extra
    if m != expected:
        raise AssertionError(f"output dimension {m} differs from the expected {expected}")
    mats = comp.reshape(m, s, n).transpose(1, 2, 0)
    beta = min(Fraction(1), Fraction(alpha * m, n))
    active = [d.dim > 0 for d in duals]
    t = xv_bound(chain, [net.params for net in nets], beta, n, active)
    return DigitalNet(F, mats, NetParams(F.q, t, alpha, beta, n, m, s))
