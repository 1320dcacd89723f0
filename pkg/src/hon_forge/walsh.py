"""Walsh functions and duality for arbitrary point multisets in base b.

Root-of-unity sums are kept exactly as integer count vectors over the
exponents ``0..b-1`` (the group algebra of Z_b).  A count vector represents
zero iff its polynomial is divisible by the b-th cyclotomic polynomial.

Frequency vectors ``k`` in ``{0..b^r-1}^s`` are listed lexicographically with
the last coordinate varying fastest; the same ordering indexes the boxes of
the point vector.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np
from sympy import Poly, cyclotomic_poly, symbols

from hon_forge._limits import EnumerationLimitError, max_enum
from hon_forge.nets import PointSet

__all__ = [
    "ExpVector",
    "ExpMatrix",
    "WalshSpectrum",
    "PointVector",
    "walsh",
    "k_vectors",
    "walsh_matrix",
    "dual_vector",
    "point_vector",
    "dual_set",
    "mu_alpha_int",
    "mu_alpha",
    "rho_alpha",
    "general_strict_t",
    "verify_net_walsh",
    "verify_net_geometric",
    "reconstruct_points",
    "digit_add",
    "digit_neg",
    "digit_sub",
    "WALSH_MATRIX_CAP",
]

WALSH_MATRIX_CAP = 2**16


@lru_cache(maxsize=None)
def _cyclotomic(b: int) -> np.ndarray:
    """Coefficients of Phi_b, lowest degree first."""
    x = symbols("x")
    coeffs = Poly(cyclotomic_poly(b, x), x).all_coeffs()[::-1]
    return np.array([int(c) for c in coeffs], dtype=np.int64)


def _reduce(counts: np.ndarray, b: int) -> np.ndarray:
    """Remainder of the count polynomials (last axis) modulo Phi_b."""
    phi = _cyclotomic(b)
    d = len(phi) - 1
    a = np.array(counts, dtype=np.int64, copy=True)
    for deg in range(b - 1, d - 1, -1):
        lead = a[..., deg].copy()
        a[..., deg - d : deg + 1] -= lead[..., None] * phi
    return a[..., :d]


@dataclass(frozen=True)
class ExpVector:
    """Exact value of ``sum_e counts[e] * omega_b**e``."""

    b: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.b:
            raise ValueError(f"need {self.b} counts, got {len(self.counts)}")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @classmethod
    def from_exponents(cls, b: int, exponents: Iterable[int]) -> "ExpVector":
        e = np.asarray(list(exponents), dtype=np.int64) % b
        return cls(b, tuple(np.bincount(e, minlength=b)))

    @classmethod
    def integer(cls, b: int, value: int) -> "ExpVector":
        return cls(b, (value,) + (0,) * (b - 1))

    def canonical(self) -> tuple[int, ...]:
        return tuple(int(x) for x in _reduce(np.array(self.counts), self.b))

    def is_zero(self) -> bool:
        return not any(self.canonical())

    def __eq__(self, other):
        if isinstance(other, int):
            other = ExpVector.integer(self.b, other)
        if not isinstance(other, ExpVector):
            return NotImplemented
        return self.b == other.b and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.b, self.canonical()))

    def __add__(self, other: "ExpVector") -> "ExpVector":
        return ExpVector(self.b, tuple(x + y for x, y in zip(self.counts, other.counts)))

    def __neg__(self) -> "ExpVector":
        return ExpVector(self.b, tuple(-x for x in self.counts))

    def __sub__(self, other: "ExpVector") -> "ExpVector":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ExpVector(self.b, tuple(other * x for x in self.counts))
        out = [0] * self.b
        for i, x in enumerate(self.counts):
            if x:
                for j, y in enumerate(other.counts):
                    out[(i + j) % self.b] += x * y
        return ExpVector(self.b, tuple(out))

    __rmul__ = __mul__

    def conj(self) -> "ExpVector":
        return ExpVector(self.b, (self.counts[0],) + self.counts[:0:-1])

    def __complex__(self):
        w = np.exp(2j * np.pi * np.arange(self.b) / self.b)
        return complex(np.dot(self.counts, w))


class ExpMatrix:
    """Matrix over the group algebra, stored as counts of shape (rows, cols, b)."""

    def __init__(self, b: int, counts):
        self.b = b
        self.counts = np.asarray(counts, dtype=np.int64)
        if self.counts.ndim != 3 or self.counts.shape[2] != b:
            raise ValueError("counts must have shape (rows, cols, b)")

    @classmethod
    def from_exponents(cls, b: int, exponents) -> "ExpMatrix":
        E = np.asarray(exponents, dtype=np.int64) % b
        return cls(b, (E[..., None] == np.arange(b)).astype(np.int64))

    @classmethod
    def from_ints(cls, b: int, values) -> "ExpMatrix":
        V = np.atleast_2d(np.asarray(values, dtype=np.int64))
        if V.shape[0] == 1 and np.ndim(values) == 1:
            V = V.T
        counts = np.zeros(V.shape + (b,), dtype=np.int64)
        counts[..., 0] = V
        return cls(b, counts)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape[:2]

    def __getitem__(self, idx) -> ExpVector:
        return ExpVector(self.b, tuple(self.counts[idx]))

    def conj(self) -> "ExpMatrix":
        return ExpMatrix(self.b, np.concatenate([self.counts[..., :1], self.counts[..., :0:-1]], axis=-1))

    def __matmul__(self, other: "ExpMatrix") -> "ExpMatrix":
        b = self.b
        A = np.ascontiguousarray(np.moveaxis(self.counts, -1, 0), dtype=np.float64)
        B = np.ascontiguousarray(np.moveaxis(other.counts, -1, 0), dtype=np.float64)
        bound = np.abs(self.counts).max(initial=0) * np.abs(other.counts).max(initial=0) * self.shape[1] * b
        if bound >= 2**52:
            raise OverflowError("group-algebra product too large for exact float accumulation")
        out = np.zeros(self.shape[:1] + other.shape[1:] + (b,), dtype=np.int64)
        for e1 in range(b):
            for e2 in range(b):
                out[..., (e1 + e2) % b] += np.rint(A[e1] @ B[e2]).astype(np.int64)
        return ExpMatrix(b, out)

    def __mul__(self, scalar: int) -> "ExpMatrix":
        return ExpMatrix(self.b, self.counts * scalar)

    __rmul__ = __mul__

    def canonical(self) -> np.ndarray:
        return _reduce(self.counts, self.b)

    def zero_mask(self) -> np.ndarray:
        return ~np.any(self.canonical(), axis=-1)

    def equals(self, other: "ExpMatrix") -> bool:
        return self.shape == other.shape and np.array_equal(self.canonical(), other.canonical())


# -- Walsh functions ----------------------------------------------------------


def _int_digits(values, b: int, width: int) -> np.ndarray:
    """Base-b digits, least significant first, along a new last axis."""
    v = np.asarray(values, dtype=np.int64)
    return (v[..., None] // b ** np.arange(width, dtype=np.int64)) % b


def walsh(k: int, digits, b: int) -> int:
    """Exponent of ``wal_k(x)`` where ``digits`` are the base-b digits of x after the point."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    digits = list(digits)
    kappa = []
    while k:
        k, d = divmod(k, b)
        kappa.append(d)
    if len(kappa) > len(digits):
        raise ValueError(f"need {len(kappa)} digits of x, got {len(digits)}")
    return sum(c * x for c, x in zip(kappa, digits)) % b


def k_vectors(b: int, s: int, r: int) -> np.ndarray:
    """All k in {0..b^r-1}^s, last coordinate varying fastest."""
    K = b**r
    idx = np.arange(K**s, dtype=np.int64)
    return np.stack([(idx // K ** (s - 1 - j)) % K for j in range(s)], axis=1)


def _walsh_exponents(kvecs: np.ndarray, point_digits: np.ndarray, b: int, r: int) -> np.ndarray:
    """(K, N) exponents of wal_k(x_h); ``point_digits`` has shape (N, s, >= r)."""
    kd = _int_digits(kvecs, b, r)  # (K, s, r)
    xd = point_digits[:, :, :r]  # (N, s, r)
    return np.einsum("ksi,nsi->kn", kd, xd) % b


def _grid_digits(b: int, s: int, r: int) -> np.ndarray:
    """Digits of the box corners b^-r * l for l in K ordering, shape (b^{sr}, s, r)."""
    lv = k_vectors(b, s, r)
    return _int_digits(lv, b, r)[..., ::-1]


def walsh_matrix(b: int, s: int, r: int, cap: int = WALSH_MATRIX_CAP) -> np.ndarray:
    """Exponent matrix ``W[k, l] = wal_k(b^-r l)``."""
    if b ** (s * r) > cap:
        raise EnumerationLimitError(f"Walsh matrix of order {b}^{s * r} exceeds cap {cap}")
    return _walsh_exponents(k_vectors(b, s, r), _grid_digits(b, s, r), b, r)


# -- spectra and point vectors -----------------------------------------------


@dataclass
class PointVector:
    b: int
    s: int
    r: int
    counts: np.ndarray  # length b^{sr}, K ordering

    @property
    def N(self) -> int:
        return int(self.counts.sum())


@dataclass
class WalshSpectrum:
    b: int
    s: int
    r: int
    kvecs: np.ndarray  # (K, s)
    counts: np.ndarray  # (K, b)

    def __getitem__(self, k) -> ExpVector:
        k = tuple(int(x) for x in np.atleast_1d(k))
        K = self.b**self.r
        i = sum(kj * K ** (self.s - 1 - j) for j, kj in enumerate(k))
        if len(k) != self.s or not 0 <= i < len(self.kvecs) or tuple(self.kvecs[i]) != k:
            raise KeyError(k)
        return ExpVector(self.b, tuple(self.counts[i]))

    def as_matrix(self) -> ExpMatrix:
        return ExpMatrix(self.b, self.counts[:, None, :])

    def nonzero_mask(self) -> np.ndarray:
        return np.any(_reduce(self.counts, self.b), axis=-1)

    def to_tsv(self) -> str:
        header = [f"k_{j + 1}" for j in range(self.s)] + [f"e_{e}" for e in range(self.b)]
        lines = ["\t".join(header)]
        for k, c in zip(self.kvecs, self.counts):
            lines.append("\t".join(str(int(x)) for x in (*k, *c)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str, b: int, r: int) -> "WalshSpectrum":
        rows = [line.split("\t") for line in text.splitlines() if line.strip()]
        header, body = rows[0], rows[1:]
        s = sum(1 for h in header if h.startswith("k_"))
        if len(header) != s + b:
            raise ValueError(f"expected {s} k columns and {b} count columns")
        data = np.array(body, dtype=np.int64).reshape(-1, s + b)
        kv, counts = data[:, :s], data[:, s:]
        if not np.array_equal(kv, k_vectors(b, s, r)):
            raise ValueError("spectrum rows must list every k in the standard order")
        return cls(b, s, r, kv, counts)


def _check_depth(P: PointSet, r: int):
    if r < 0:
        raise ValueError("r must be nonnegative")
    if P.depth < r:
        raise ValueError(f"points carry {P.depth} digits, resolution {r} needs more")


def _spectrum_counts(kvecs: np.ndarray, P: PointSet, r: int, chunk: int = 1 << 22) -> np.ndarray:
    b, N = P.b, P.N
    out = np.zeros((len(kvecs), b), dtype=np.int64)
    step = max(1, chunk // max(N, 1))
    for start in range(0, len(kvecs), step):
        E = _walsh_exponents(kvecs[start : start + step], P.digits, b, r)
        rows = np.arange(E.shape[0])[:, None]
        out[start : start + step] = np.bincount((rows * b + E).ravel(), minlength=E.shape[0] * b).reshape(-1, b)
    return out


def dual_vector(P: PointSet, r: int, cap: int = WALSH_MATRIX_CAP) -> WalshSpectrum:
    """``c_k = sum_h wal_k(x_h)`` for every k in K^s_{b,r}, exactly."""
    _check_depth(P, r)
    if P.b ** (P.s * r) > cap:
        raise EnumerationLimitError(f"{P.b}^{P.s * r} frequencies exceed cap {cap}")
    kv = k_vectors(P.b, P.s, r)
    return WalshSpectrum(P.b, P.s, r, kv, _spectrum_counts(kv, P, r))


def _box_index(P: PointSet, r: int) -> np.ndarray:
    b, s = P.b, P.s
    weights = b ** np.arange(r - 1, -1, -1, dtype=np.int64)
    a = P.digits[:, :, :r] @ weights  # (N, s)
    return a @ (b**r) ** np.arange(s - 1, -1, -1, dtype=np.int64)


def point_vector(P: PointSet, r: int) -> PointVector:
    """Number of points in each box ``prod_j [a_j b^-r, (a_j+1) b^-r)``."""
    _check_depth(P, r)
    counts = np.bincount(_box_index(P, r), minlength=P.b ** (P.s * r))
    return PointVector(P.b, P.s, r, counts)


def dual_set(spec: WalshSpectrum) -> set[tuple[int, ...]]:
    return {tuple(int(x) for x in k) for k in spec.kvecs[spec.nonzero_mask()]}


def reconstruct_points(spec: WalshSpectrum, depth: int | None = None) -> PointSet:
    """Point multiset with the given spectrum, each point at the corner of its box.

    Raises ValueError when the spectrum does not come from a multiset.
    """
    b, s, r = spec.b, spec.s, spec.r
    W = ExpMatrix.from_exponents(b, walsh_matrix(b, s, r))
    scaled = (W.conj() @ spec.as_matrix()).canonical()[:, 0, :]
    total = b ** (s * r)
    if np.any(scaled[:, 1:]) or np.any(scaled[:, 0] % total) or np.any(scaled[:, 0] < 0):
        raise ValueError("spectrum does not correspond to a point multiset at this resolution")
    counts = scaled[:, 0] // total
    depth = r if depth is None else depth
    if depth < r:
        raise ValueError("depth must be at least r")
    corners = _grid_digits(b, s, r)
    digits = np.zeros((int(counts.sum()), s, depth), dtype=np.int64)
    digits[:, :, :r] = np.repeat(corners, counts, axis=0)
    return PointSet(b, digits)


# -- weights and quality ------------------------------------------------------


def mu_alpha_int(k: int, b: int, alpha: int) -> int:
    """Sum of the min(nu, alpha) largest positions of nonzero base-b digits of k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    positions = []
    pos = 1
    while k:
        k, d = divmod(k, b)
        if d:
            positions.append(pos)
        pos += 1
    return sum(sorted(positions, reverse=True)[:alpha])


def mu_alpha(k, b: int, alpha: int) -> int:
    return sum(mu_alpha_int(int(kj), b, alpha) for kj in np.atleast_1d(k))


def rho_alpha(D, b: int, alpha: int, r: int) -> int:
    weights = [mu_alpha(k, b, alpha) for k in D if any(k)]
    return min(weights) if weights else r + 1


def _low_weight_k(b: int, s: int, r: int, alpha: int, budget: int) -> np.ndarray:
    """Nonzero k in K^s_{b,r} with mu_alpha(k) <= budget."""
    per = [(k, mu_alpha_int(k, b, alpha)) for k in range(b**r)]
    per = [(k, w) for k, w in per if w <= budget]
    found = []

    def rec(j, left, acc):
        if j == s:
            if any(acc):
                found.append(acc)
            return
        for k, w in per:
            if w <= left:
                rec(j + 1, left - w, acc + (k,))

    rec(0, budget, ())
    return np.array(found, dtype=np.int64).reshape(-1, s)


def _dual_weight_below(P: PointSet, alpha: int, r: int, cap: int) -> bool:
    """Whether some nonzero k of weight <= r has a nonzero Walsh coefficient at resolution r."""
    b, s = P.b, P.s
    if b ** (s * r) > cap:
        raise EnumerationLimitError(f"resolution {r} needs {b}^{s * r} frequencies")
    _check_depth(P, r)
    kv = _low_weight_k(b, s, r, alpha, r)
    return bool(len(kv)) and bool(np.any(_reduce(_spectrum_counts(kv, P, r), b)))


def verify_net_walsh(P: PointSet, t: int, alpha: int, beta, n: int, m: int, limit: int | None = None) -> bool:
    """P is a (t, alpha, beta, n x m, s)-net iff rho_alpha(D_r) >= r + 1 for r = floor(beta n) - t."""
    if P.N != P.b**m:
        raise ValueError(f"expected {P.b}^{m} points, got {P.N}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    r = math.floor(Fraction(beta) * n) - t
    return r <= 0 or not _dual_weight_below(P, alpha, r, max_enum(limit))


def general_strict_t(P: PointSet, alpha: int, beta, n: int, m: int, limit: int | None = None) -> int:
    """Smallest t for which P is a (t, alpha, beta, n x m, s)-net, via Walsh coefficients.

    Scans t downward from floor(beta n); at each resolution r = floor(beta n) - t
    only frequencies of weight at most r matter for the criterion
    ``rho_alpha(D_r) >= r + 1``.
    """
    if P.N != P.b**m:
        raise ValueError(f"expected {P.b}^{m} points, got {P.N}")
    L = math.floor(Fraction(beta) * n)
    cap = max_enum(limit)
    for r in range(1, L + 1):
        if _dual_weight_below(P, alpha, r, cap):
            return L - r + 1
    return 0


def _geometric_shapes(n: int, alpha: int, budget: int) -> list[tuple[int, ...]]:
    """Per-coordinate digit-index sets that are maximal for their top-alpha weight."""
    shapes = []
    for size in range(alpha + 1):
        for top in itertools.combinations(range(1, n + 1), size):
            if sum(top) > budget:
                continue
            if size == alpha and size:
                shapes.append(tuple(range(1, top[0])) + top)
            else:
                shapes.append(top)
    return shapes


def verify_net_geometric(P: PointSet, t: int, alpha: int, beta, n: int, m: int, limit: int | None = None) -> bool:
    """Count points in every generalised elementary interval of admissible shape.

    Each interval fixes digits at chosen positions per coordinate; with
    ``|nu|`` digits fixed it must hold exactly ``b^(m - |nu|)`` points.
    """
    b, s = P.b, P.s
    if P.N != b**m:
        raise ValueError(f"expected {b}^{m} points, got {P.N}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    budget = math.floor(Fraction(beta) * n) - t
    if budget <= 0:
        return True
    _check_depth(P, n)
    shapes = _geometric_shapes(n, alpha, budget)
    weights = [sum(sorted(sh, reverse=True)[:alpha]) for sh in shapes]
    counts = np.zeros(budget + 1, dtype=object)
    for w in weights:
        counts[w] += 1
    poly = np.zeros(budget + 1, dtype=object)
    poly[0] = 1
    for _ in range(s):
        poly = np.convolve(poly, counts)[: budget + 1]
    combos = int(sum(poly))
    if combos > max_enum(limit):
        raise EnumerationLimitError(f"{combos} interval shapes exceed the enumeration cap")
    indexed = sorted(zip(weights, shapes))

    def visit(j, left, chosen):
        if j == s:
            cols = [P.digits[:, jj, i - 1] for jj, sh in enumerate(chosen) for i in sh]
            size = len(cols)
            if size > m:
                return False
            key = np.zeros(P.N, dtype=np.int64)
            for c in cols:
                key = key * b + c
            hist = np.bincount(key, minlength=b**size)
            return bool(np.all(hist == b ** (m - size)))
        for w, sh in indexed:
            if w > left:
                break
            if not visit(j + 1, left - w, chosen + [sh]):
                return False
        return True

    return visit(0, budget, [])


# -- digit arithmetic ---------------------------------------------------------


def digit_add(x, y, b: int) -> np.ndarray:
    """Digitwise sum modulo b (the group operation behind the Walsh characters)."""
    return (np.asarray(x) + np.asarray(y)) % b


def digit_neg(x, b: int) -> np.ndarray:
    return (-np.asarray(x)) % b


def digit_sub(x, y, b: int) -> np.ndarray:
    return (np.asarray(x) - np.asarray(y)) % b
