"""Exact arithmetic and linear algebra over finite fields F_q, q = p^e.

Field elements are plain integers in ``[0, q)``: the base-p digits of an
integer are the coefficients (lowest degree first) of the polynomial
representing the element.  This is also the fixed bijection ``eta`` used when
turning digits into field elements, so ``eta(0)`` is the zero element.

All array-valued operations accept and return ``numpy`` integer arrays of
element indices; scalar inputs give Python ``int`` results.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from sympy import Poly, isprime, symbols

__all__ = [
    "GF",
    "FieldElement",
    "make_field",
    "field_of_order",
    "eta",
    "eta_inv",
    "row_reduce",
    "rank",
    "null_space",
    "matmul",
    "expand_symbol",
    "contract_symbol",
]

MAX_ORDER = 2**20
_TABLE_ADD_MAX = 1024

# Conway polynomials, coefficients lowest degree first (monic).
_CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
}

_X = symbols("x")


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    return Poly(list(reversed(coeffs)), _X, modulus=p).is_irreducible


def _first_irreducible(p: int, e: int) -> tuple[int, ...]:
    for low in range(p**e):
        coeffs = tuple((low // p**i) % p for i in range(e)) + (1,)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """The finite field with ``q = p**e`` elements.

    Use :func:`make_field` rather than calling the constructor; it caches one
    instance per ``(p, e)`` so fields can be compared by identity.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        q = self.q
        self.digits = np.array(
            [[(h // p**i) % p for i in range(e)] for h in range(q)], dtype=np.int64
        ).reshape(q, e)
        self._powers = p ** np.arange(e, dtype=np.int64)

        # log / antilog tables over a primitive element
        gen = self._find_generator()
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, gen)
        exp[q - 1 :] = exp[: q - 1]
        self.generator = gen
        self._exp = exp
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv

        self._add_table = None
        if e > 1 and p != 2 and q <= _TABLE_ADD_MAX:
            a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
            self._add_table = self._digit_add(a, b)
        self._neg = self._digit_neg(np.arange(q))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    # -- construction helpers -------------------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self.digits[a], self.digits[b]
        prod = np.convolve(da, db) % p
        mod = np.array(self.modulus, dtype=np.int64)
        for deg in range(len(prod) - 1, e - 1, -1):
            c = prod[deg]
            if c:
                prod[deg - e : deg + 1] = (prod[deg - e : deg + 1] - c * mod) % p
        return int(prod[:e] @ self._powers)

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = [f for f in range(2, q) if (q - 1) % f == 0 and isprime(f)]
        for g in range(2, q) if self.e == 1 else range(self.p, q):
            if all(self._slow_pow(g, (q - 1) // f) != 1 for f in factors):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _slow_pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            k >>= 1
        return result

    def _digit_add(self, a, b):
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._powers

    def _digit_neg(self, a):
        return ((-self.digits[a]) % self.p) @ self._powers

    # -- vectorised arithmetic ------------------------------------------------
    @staticmethod
    def _out(x):
        return int(x) if np.ndim(x) == 0 else x

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            r = (a + b) % self.p
        elif self.p == 2:
            r = a ^ b
        elif self._add_table is not None:
            r = self._add_table[a, b]
        else:
            r = self._digit_add(a, b)
        return self._out(r)

    def neg(self, a):
        return self._out(self._neg[np.asarray(a, dtype=np.int64)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return self._out((a * b) % self.p)
        r = self._exp[self._log[a] + self._log[b]]
        return self._out(np.where((a == 0) | (b == 0), 0, r))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._out(self._inv[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return self._out(np.ones_like(a))
        if k < 0:
            a, k = np.asarray(self.inv(a)), -k
        r = self._exp[(self._log[a] * k) % (self.q - 1)]
        return self._out(np.where(a == 0, 0, r))

    def dot(self, u, v) -> int:
        """Standard bilinear form sum(u_i * v_i)."""
        prods = np.atleast_1d(self.mul(np.asarray(u), np.asarray(v)))
        return self.sum(prods)

    def sum(self, values, axis=None):
        values = np.asarray(values, dtype=np.int64)
        if axis is None:
            values, axis = values.reshape(-1), 0
        if self.e == 1:
            return self._out(values.sum(axis=axis) % self.p)
        if self.p == 2:
            return self._out(np.bitwise_xor.reduce(values, axis=axis))
        digit_sum = self.digits[values].sum(axis=axis) % self.p
        return self._out(digit_sum @ self._powers)

    def element(self, h: int) -> "FieldElement":
        return FieldElement(self, int(h))

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)


def make_field(p: int, e: int = 1) -> GF:
    """Return the field ``F_{p^e}`` with a deterministic modulus.

    The modulus is the Conway polynomial for ``p <= 7, e <= 4`` and otherwise
    the first monic irreducible polynomial in base-p counting order of its
    lower coefficients.  For ``e == 1`` the modulus is ``x`` (plain Z_p).
    """
    if not isinstance(p, (int, np.integer)) or not isprime(int(p)):
        raise ValueError(f"characteristic {p} is not prime")
    if e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    if p**e > MAX_ORDER:
        raise ValueError(f"field order {p}^{e} exceeds cap {MAX_ORDER}")
    return _cached_field(int(p), int(e))


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int) -> GF:
    modulus = (0, 1) if e == 1 else _CONWAY.get((p, e)) or _first_irreducible(p, e)
    return GF(p, e, modulus)


def field_of_order(q: int) -> GF:
    """Field of order ``q`` where ``q`` is a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return make_field(p, e)


@dataclass(frozen=True)
class FieldElement:
    field: GF
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} out of range for {self.field}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.value])

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise TypeError("field mismatch")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field!r}({self.value})"


def eta(field: GF, h: int) -> FieldElement:
    """The digit-to-element bijection: base-p digits of ``h`` become coefficients."""
    if not 0 <= h < field.q:
        raise ValueError(f"{h} not in [0, {field.q})")
    return FieldElement(field, int(h))


def eta_inv(x: FieldElement) -> int:
    return x.value


# -- linear algebra -----------------------------------------------------------


def row_reduce(field: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = field.mul(R[r], field.inv(int(R[r, c])))
        factors = R[:, c].copy()
        factors[r] = 0
        others = np.nonzero(factors)[0]
        if others.size:
            R[others] = field.sub(R[others], field.mul(factors[others, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(field: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(row_reduce(field, M)[1])


def null_space(field: GF, M) -> np.ndarray:
    """Basis (as rows) of ``{x : M x^T = 0}``.

    One vector per free column in ascending order, with a one in that column.
    """
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = row_reduce(field, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = field.neg(int(R[i, f]))
    return basis


def matmul(field: GF, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if field.e == 1:
        return (A @ B) % field.p
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for k in range(A.shape[-1]):
        out = field.add(out, field.mul(A[..., k, None], B[k][None, ...]))
    return out


# -- subfield coordinates -----------------------------------------------------


@lru_cache(maxsize=None)
def _subfield_tables(big: GF, small: GF) -> tuple[np.ndarray, np.ndarray]:
    if big.p != small.p or big.e % small.e:
        raise ValueError(f"{small} is not a subfield of {big}")
    f = big.e // small.e
    # embed small -> big by sending x to the first root of small.modulus
    if small.e == 1 or f == 1:
        embed = np.arange(small.q, dtype=np.int64)
    else:
        coeffs = np.array(small.modulus, dtype=np.int64)  # in F_p, hence in big
        root = next(
            y for y in range(big.q) if big.dot(coeffs, _powers_of(big, y, len(coeffs))) == 0
        )
        embed = np.array(
            [big.sum(big.mul(small.digits[h], _powers_of(big, root, small.e))) for h in range(small.q)],
            dtype=np.int64,
        )
    theta = big.p if big.e > 1 else 1
    theta_pows = _powers_of(big, theta, f)
    expand = np.zeros((big.q, f), dtype=np.int64)
    contract = np.zeros(small.q**f, dtype=np.int64)
    for idx, vec in enumerate(itertools.product(range(small.q), repeat=f)):
        vec = vec[::-1]  # first coordinate varies fastest
        value = big.sum(big.mul(embed[list(vec)], theta_pows))
        expand[value] = vec
        contract[idx] = value
    return expand, contract


def _powers_of(field: GF, y: int, count: int) -> np.ndarray:
    out = np.ones(count, dtype=np.int64)
    for i in range(1, count):
        out[i] = field.mul(int(out[i - 1]), y)
    return out


def expand_symbol(big: GF, small: GF, x) -> np.ndarray:
    """Coordinates of ``x`` in ``big`` w.r.t. the basis 1, theta, ..., theta^(f-1) over ``small``.

    ``theta`` is the class of the polynomial variable in ``big``.  Works
    elementwise on arrays, appending a trailing axis of length f.
    """
    expand, _ = _subfield_tables(big, small)
    return expand[np.asarray(x, dtype=np.int64)]


def contract_symbol(big: GF, small: GF, vec) -> int | np.ndarray:
    _, contract = _subfield_tables(big, small)
    vec = np.asarray(vec, dtype=np.int64)
    f = vec.shape[-1]
    if f != big.e // small.e:
        raise ValueError("coordinate vector has the wrong length")
    index = vec @ (small.q ** np.arange(f, dtype=np.int64))
    return GF._out(contract[index])
