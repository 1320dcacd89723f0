"""Digital (t, alpha, beta, n x m, s)-nets over finite fields.

A net is stored as its generating matrices ``C_1..C_s`` (each ``n x m`` over
F_q) together with declared parameters.  The quality parameter can be
computed two ways that share no linear algebra:

* :func:`strict_t` searches the dual space (null space of the stacked matrix
  ``(C_1^T | ... | C_s^T)``) for its smallest mu-weight vector.
* :func:`verify_net_definition` checks linear independence of the selected
  rows of the ``C_j`` directly, for every admissible index selection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from hon_forge._limits import EnumerationLimitError, max_enum
from hon_forge.gf import GF, field_of_order, matmul, null_space, rank

__all__ = [
    "NetParams",
    "DigitalNet",
    "PointSet",
    "LinearSpace",
    "DualSpaceBasis",
    "EnumerationLimitError",
    "generate_points",
    "mu_weight",
    "mu_weights",
    "dual_space",
    "min_mu_distance",
    "min_mu_distance_exhaustive",
    "strict_t",
    "verify_net_definition",
    "pascal_net",
    "interlace",
    "project",
    "read_net",
    "write_net",
    "format_points",
]


@dataclass(frozen=True)
class NetParams:
    b: int
    t: int
    alpha: int
    beta: Fraction
    n: int
    m: int
    s: int

    def __post_init__(self):
        object.__setattr__(self, "beta", Fraction(self.beta))
        if min(self.n, self.m, self.s, self.alpha) < 1:
            raise ValueError("n, m, s and alpha must be positive")
        if not 0 < self.beta <= min(1, Fraction(self.alpha * self.m, self.n)):
            raise ValueError(f"beta={self.beta} outside (0, min(1, alpha*m/n)]")
        if not 0 <= self.t <= self.floor_beta_n:
            raise ValueError(f"t={self.t} outside [0, floor(beta*n)={self.floor_beta_n}]")

    @property
    def floor_beta_n(self) -> int:
        return math.floor(self.beta * self.n)

    @property
    def strength(self) -> int:
        return self.floor_beta_n - self.t

    @property
    def beta_n_integral(self) -> bool:
        return (self.beta * self.n).denominator == 1


@dataclass
class DigitalNet:
    field: GF
    matrices: np.ndarray  # shape (s, n, m)
    params: NetParams

    def __post_init__(self):
        self.matrices = np.asarray(self.matrices, dtype=np.int64)
        if self.matrices.ndim != 3:
            raise ValueError("matrices must have shape (s, n, m)")
        s, n, m = self.matrices.shape
        p = self.params
        if (p.s, p.n, p.m, p.b) != (s, n, m, self.field.q):
            raise ValueError(
                f"declared (s, n, m, b)={(p.s, p.n, p.m, p.b)} does not match matrices "
                f"{(s, n, m)} over {self.field}"
            )
        if self.matrices.size and not (0 <= self.matrices.min() and self.matrices.max() < self.field.q):
            raise ValueError("matrix entries out of range")

    @property
    def s(self) -> int:
        return self.matrices.shape[0]

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    @property
    def m(self) -> int:
        return self.matrices.shape[2]

    @property
    def q(self) -> int:
        return self.field.q

    @classmethod
    def from_matrices(cls, field: GF, matrices, t=None, alpha=1, beta=None) -> "DigitalNet":
        """Wrap matrices with declared parameters; ``t`` defaults to the trivial bound."""
        mats = np.asarray(matrices, dtype=np.int64)
        s, n, m = mats.shape
        if beta is None:
            beta = min(Fraction(1), Fraction(alpha * m, n))
        beta = Fraction(beta)
        if t is None:
            t = math.floor(beta * n)
        return cls(field, mats, NetParams(field.q, t, alpha, beta, n, m, s))

    def stacked(self) -> np.ndarray:
        """The m x sn matrix ``(C_1^T | ... | C_s^T)``."""
        return np.concatenate([C.T for C in self.matrices], axis=1)


@dataclass
class PointSet:
    """A multiset of points in [0,1)^s held as exact base-b digits.

    ``digits[h, j, i]`` is digit ``i+1`` of coordinate ``j`` of point ``h``.
    """

    b: int
    digits: np.ndarray  # shape (N, s, depth)

    def __post_init__(self):
        self.digits = np.asarray(self.digits, dtype=np.int64)
        if self.digits.ndim != 3:
            raise ValueError("digits must have shape (N, s, depth)")
        if self.digits.size and not (0 <= self.digits.min() and self.digits.max() < self.b):
            raise ValueError("digit out of range")

    @property
    def N(self) -> int:
        return self.digits.shape[0]

    @property
    def s(self) -> int:
        return self.digits.shape[1]

    @property
    def depth(self) -> int:
        return self.digits.shape[2]

    def fractions(self) -> list[tuple[Fraction, ...]]:
        weights = [Fraction(1, self.b ** (i + 1)) for i in range(self.depth)]
        return [
            tuple(sum((int(d) * w for d, w in zip(coord, weights)), Fraction(0)) for coord in point)
            for point in self.digits
        ]

    def as_float(self) -> np.ndarray:
        scale = float(self.b) ** -np.arange(1, self.depth + 1)
        return self.digits @ scale

    @classmethod
    def from_fractions(cls, points, b: int, depth: int) -> "PointSet":
        """Build from b-adic rationals whose denominators divide ``b**depth``."""
        rows = []
        for point in points:
            coords = []
            for x in point:
                x = Fraction(x)
                if not 0 <= x < 1:
                    raise ValueError(f"{x} not in [0, 1)")
                a = x * b**depth
                if a.denominator != 1:
                    raise ValueError(f"{x} needs more than {depth} base-{b} digits")
                a = int(a)
                coords.append([(a // b ** (depth - 1 - i)) % b for i in range(depth)])
            rows.append(coords)
        return cls(b, np.array(rows, dtype=np.int64).reshape(len(rows), -1, depth))


@dataclass
class LinearSpace:
    """A linear subspace of F_q^(s*n), coordinate ``j`` occupying columns ``j*n .. j*n+n-1``."""

    field: GF
    s: int
    n: int
    basis: np.ndarray  # (k, s*n), independent rows
    _delta: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=np.int64).reshape(-1, self.s * self.n)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return self.field.q**self.dim

    def delta(self, alpha: int, cap: int) -> int | None:
        key = (alpha, cap)
        if key not in self._delta:
            self._delta[key] = min_mu_distance(self, alpha, cap)
        return self._delta[key]

    def contains(self, vectors) -> bool:
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
        return rank(self.field, np.vstack([self.basis, vectors])) == self.dim

    def elements(self) -> np.ndarray:
        """Every vector of the space (q^dim rows)."""
        return _all_combinations(self.field, self.basis)


@dataclass
class DualSpaceBasis(LinearSpace):
    m: int = 0


# -- points -----------------------------------------------------------------


def generate_points(net: DigitalNet, eta: Sequence[int] | None = None) -> PointSet:
    """The q^m points of the net, in order h = 0, 1, ..., q^m - 1.

    ``eta`` optionally replaces the digit-to-element bijection; it must be a
    permutation of ``range(q)`` with ``eta[0] == 0``.
    """
    F, q, m = net.field, net.q, net.m
    perm = np.arange(q) if eta is None else np.asarray(eta, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(q)) or perm[0] != 0:
        raise ValueError("eta must be a permutation of range(q) fixing 0")
    inv_perm = np.argsort(perm)
    N = q**m
    h = np.arange(N, dtype=np.int64)
    h_digits = (h[None, :] // (q ** np.arange(m, dtype=np.int64))[:, None]) % q  # (m, N)
    h_vec = perm[h_digits]
    y = np.stack([matmul(F, C, h_vec) for C in net.matrices])  # (s, n, N)
    return PointSet(q, inv_perm[y].transpose(2, 0, 1))


def format_points(points: PointSet, depth: int | None = None) -> str:
    """One line per point, each coordinate a base-b digit string, tab-separated."""
    depth = points.depth if depth is None else depth
    alphabet = "0123456789abcdefghijklmnopqrstuvwxyz"
    sep = "" if points.b <= len(alphabet) else "."
    lines = []
    for point in points.digits[:, :, :depth]:
        if sep:
            coords = [sep.join(str(int(d)) for d in c) for c in point]
        else:
            coords = ["".join(alphabet[d] for d in c) for c in point]
        lines.append("\t".join(coords))
    return "\n".join(lines) + ("\n" if lines else "")


# -- weights and the dual space ---------------------------------------------


def mu_weights(vectors, alpha: int, n: int) -> np.ndarray:
    """Vectorised mu_{alpha,n} over the last axis (length s*n)."""
    V = np.asarray(vectors)
    s = V.shape[-1] // n
    V = V.reshape(V.shape[:-1] + (s, n))
    pos = np.where(V != 0, np.arange(1, n + 1), 0)
    top = -np.sort(-pos, axis=-1)[..., :alpha]
    return top.sum(axis=(-1, -2))


def mu_weight(a, alpha: int, n: int) -> int:
    a = np.asarray(a)
    if a.ndim != 1 or a.size % n:
        raise ValueError(f"vector length {a.size} is not a multiple of n={n}")
    return int(mu_weights(a, alpha, n))


def dual_space(net: DigitalNet) -> DualSpaceBasis:
    C = net.stacked()
    basis = null_space(net.field, C)
    return DualSpaceBasis(net.field, net.s, net.n, basis, m=net.m)


def _coordinate_options(n: int, alpha: int, budget: int) -> list[tuple[int, tuple[int, ...]]]:
    """Index selections for one coordinate that dominate all others of equal weight.

    A selection with fewer than ``alpha`` indices is listed as is; one with
    ``alpha`` top indices is closed downward (adding smaller indices costs
    nothing).  Positions are 1-based, weights are the top-alpha sums.
    """
    opts = [(0, ())]
    for k in range(1, alpha + 1):
        for top in itertools.combinations(range(n, 0, -1), k):
            w = sum(top)
            if w > budget:
                continue
            sel = top + tuple(range(top[-1] - 1, 0, -1)) if k == alpha else top
            opts.append((w, sel))
    opts.sort(key=lambda o: (o[0], o[1]))
    return opts


def _count_combos(opts: list[tuple[int, tuple]], s: int, budget: int) -> int:
    counts = np.zeros(budget + 1, dtype=object)
    for w, _ in opts:
        counts[w] += 1
    total = np.zeros(budget + 1, dtype=object)
    total[0] = 1
    for _ in range(s):
        total = np.convolve(total, counts)[: budget + 1]
    return int(sum(total))


def _combos_of_weight(opts, s: int, w: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    if s == 0:
        if w == 0:
            yield ()
        return
    for wt, sel in opts:
        if wt > w:
            break
        for rest in _combos_of_weight(opts, s - 1, w - wt):
            yield (sel,) + rest


def min_mu_distance(dual: LinearSpace, alpha: int, cap: int) -> int | None:
    """Minimum mu_{alpha,n} weight of a nonzero vector of ``dual``, or None if it exceeds ``cap``.

    Supports are visited in nondecreasing weight; a support admits a nonzero
    vector of the space iff the basis restricted to the complementary columns
    has rank below the dimension.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    k = dual.dim
    if k == 0:
        return None
    n, s = dual.n, dual.s
    opts = _coordinate_options(n, alpha, cap)
    B = dual.basis
    all_cols = np.arange(s * n)
    for w in range(1, cap + 1):
        for combo in _combos_of_weight(opts, s, w):
            support = [j * n + i - 1 for j, sel in enumerate(combo) for i in sel]
            keep = np.setdiff1d(all_cols, support)
            if keep.size == 0 or rank(dual.field, B[:, keep]) < k:
                return w
    return None


def _all_combinations(field: GF, basis: np.ndarray) -> np.ndarray:
    k, L = basis.shape
    out = np.zeros((1, L), dtype=np.int64)
    for row in basis:
        scaled = field.mul(field.elements[:, None], row[None, :])  # (q, L)
        out = field.add(out[:, None, :], scaled[None, :, :]).reshape(-1, L)
    return out


def min_mu_distance_exhaustive(dual: LinearSpace, alpha: int, max_bits: int = 24) -> int | None:
    """Same quantity by listing every vector of the space; None for the zero space."""
    if dual.dim == 0:
        return None
    if dual.dim * math.log2(dual.field.q) > max_bits:
        raise EnumerationLimitError(f"space of size {dual.field.q}^{dual.dim} too large")
    vecs = dual.elements()
    w = mu_weights(vecs, alpha, dual.n)
    return int(w[np.any(vecs != 0, axis=1)].min())


def strict_t(net: DigitalNet, alpha: int | None = None, beta=None) -> int:
    """Smallest t for which the matrices generate a digital (t, alpha, beta, n x m, s)-net.

    Uses the dual-distance characterisation ``t = floor(beta n) + 1 - delta``,
    searching only up to ``floor(beta n) + 1``.  A zero dual space gives 0.
    """
    alpha = net.params.alpha if alpha is None else alpha
    beta = net.params.beta if beta is None else Fraction(beta)
    budget = math.floor(beta * net.n)
    delta = min_mu_distance(dual_space(net), alpha, budget + 1)
    if delta is None:
        delta = budget + 1
    return max(0, min(budget, budget + 1 - delta))


class _Echelon:
    """Incrementally maintained row echelon basis (rows keyed by pivot column)."""

    def __init__(self, field: GF, rows: dict | None = None):
        self.field = field
        self.rows = {} if rows is None else rows

    def copy(self) -> "_Echelon":
        return _Echelon(self.field, dict(self.rows))

    def insert(self, v) -> bool:
        F = self.field
        v = np.array(v, dtype=np.int64)
        for pc in sorted(self.rows):
            if v[pc]:
                v = F.sub(v, F.mul(int(v[pc]), self.rows[pc]))
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        self.rows[pc] = F.mul(v, F.inv(int(v[pc])))
        return True


def verify_net_definition(
    net: DigitalNet, t: int, alpha: int | None = None, beta=None, limit: int | None = None
) -> bool:
    """Check the row-independence definition of a digital (t, alpha, beta, n x m, s)-net.

    Every selection of strictly decreasing row indices per matrix whose
    top-alpha index sums total at most ``beta n - t`` must pick linearly
    independent rows.  Only selections that are maximal at their weight are
    visited; smaller ones are subsets of those.
    """
    alpha = net.params.alpha if alpha is None else alpha
    beta = net.params.beta if beta is None else Fraction(beta)
    if t < 0:
        raise ValueError("t must be nonnegative")
    budget = math.floor(beta * net.n) - t
    if budget <= 0:
        return True
    opts = _coordinate_options(net.n, alpha, budget)
    count = _count_combos(opts, net.s, budget)
    if count > max_enum(limit):
        raise EnumerationLimitError(f"{count} index selections exceed the enumeration cap")

    def visit(j: int, remaining: int, ech: _Echelon) -> bool:
        if j == net.s:
            return True
        for w, sel in opts:
            if w > remaining:
                break
            nxt = ech.copy()
            if not all(nxt.insert(net.matrices[j, i - 1]) for i in sel):
                return False
            if not visit(j + 1, remaining - w, nxt):
                return False
        return True

    return visit(0, budget, _Echelon(net.field))


# -- constructions -----------------------------------------------------------


def pascal_net(q: int, m: int, s: int) -> DigitalNet:
    """Generalised Faure (0, m, s)-net over F_q for s <= q.

    ``C_j[k, l] = binom(l, k) * gamma_j^(l-k)`` (0-based, upper triangular)
    with gamma_1, ..., gamma_s the first s field elements.
    """
    F = field_of_order(q)
    if s > q:
        raise ValueError(f"s={s} exceeds q={q}")
    if m < 1 or s < 1:
        raise ValueError("m and s must be positive")
    mats = np.zeros((s, m, m), dtype=np.int64)
    for j in range(s):
        for k in range(m):
            for l in range(k, m):
                mats[j, k, l] = F.mul(math.comb(l, k) % F.p, F.pow(j, l - k))
    return DigitalNet(F, mats, NetParams(q, 0, 1, Fraction(1), m, m, s))


def interlace(classical: DigitalNet, d: int) -> DigitalNet:
    """Digit interlacing of factor d: coordinates d*j .. d*j+d-1 merge into one.

    Row r (0-based) of the new matrix j is row ``r // d`` of old matrix
    ``d*j + r % d``.  The declared t is
    ``min(alpha, d) * min(m, t' + floor(s (d-1) / 2))`` with alpha = d,
    which for d = 2 reads ``2 min(m, t' + floor(s/2))``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if classical.n != classical.m:
        raise ValueError("interlacing needs a classical net with n == m")
    if classical.s % d:
        raise ValueError(f"s={classical.s} not divisible by d={d}")
    s_new, m = classical.s // d, classical.m
    old = classical.matrices
    mats = np.zeros((s_new, d * m, m), dtype=np.int64)
    for j in range(s_new):
        for r in range(d * m):
            mats[j, r] = old[d * j + r % d, r // d]
    t = d * min(m, classical.params.t + (s_new * (d - 1)) // 2)
    params = NetParams(classical.q, t, d, Fraction(1), d * m, m, s_new)
    return DigitalNet(classical.field, mats, params)


def project(net: DigitalNet, coords: Sequence[int]) -> DigitalNet:
    """Keep the listed coordinates (0-based); the declared t carries over."""
    coords = list(coords)
    if not coords or len(set(coords)) != len(coords) or not all(0 <= c < net.s for c in coords):
        raise ValueError(f"bad coordinate list {coords} for s={net.s}")
    return DigitalNet(net.field, net.matrices[coords], replace(net.params, s=len(coords)))


# -- file format -------------------------------------------------------------


def write_net(net: DigitalNet, path: str | Path | None = None) -> str:
    """Serialise as ``q n m s`` followed by s blocks of n rows of m digits."""
    lines = [f"{net.q} {net.n} {net.m} {net.s}"]
    for C in net.matrices:
        lines.extend(" ".join(str(int(x)) for x in row) for row in C)
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_net_text(text: str) -> tuple[GF, np.ndarray]:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 4:
        raise ValueError("net file header must be 'q n m s'")
    q, n, m, s = (int(x) for x in rows[0])
    F = field_of_order(q)
    body = rows[1:]
    if len(body) != s * n or any(len(r) != m for r in body):
        raise ValueError(f"expected {s * n} rows of {m} digits")
    mats = np.array(body, dtype=np.int64).reshape(s, n, m)
    if mats.size and (mats.min() < 0 or mats.max() >= q):
        raise ValueError("digit out of range")
    return F, mats


def read_net(path: str | Path, t=None, alpha: int = 1, beta=None) -> DigitalNet:
    F, mats = parse_net_text(Path(path).read_text())
    return DigitalNet.from_matrices(F, mats, t=t, alpha=alpha, beta=beta)
