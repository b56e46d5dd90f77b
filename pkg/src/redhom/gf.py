"""Exact dense linear algebra over a prime field GF(p).

Every higher layer (algebras, modules, resolutions, searches) reduces to
the primitives here: modular matrix products, reduced row echelon forms,
kernels and linear solves.  All arithmetic stays on integer numpy grids;
there is no floating point and no randomness, so identical inputs give
bit-identical outputs.

Conventions fixed once and used everywhere:

* matrices act on column vectors, kernels are spanned by columns;
* echelon pivoting takes the first nonzero row, free variables are
  enumerated in increasing column order and set to zero in particular
  solutions;
* the modulus p travels with each matrix and mixing moduli is an error.
"""

from __future__ import annotations

import numpy as np

MAX_MODULUS = 2**31


class FieldMismatchError(ValueError):
    """Raised when operands over different prime fields are combined."""


class ShapeMismatchError(ValueError):
    """Raised when matrix shapes violate an operation's contract."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, (int, np.integer)):
        raise TypeError(f"modulus must be an integer, got {type(p)!r}")
    p = int(p)
    if not 2 <= p < MAX_MODULUS:
        raise ValueError(f"modulus must satisfy 2 <= p < 2^31, got {p}")
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


def _work_dtype(p: int):
    # (p-1)^2 + (p-1) must fit the elimination dtype; int32 is fine up to 46340.
    return np.int32 if p <= 46340 else np.int64


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) % p with 64-bit accumulation, chunked so sums never overflow."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    chunk = max(1, (2**62) // max(1, (p - 1) ** 2))
    if chunk >= inner:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, inner, chunk):
        hi = min(inner, lo + chunk)
        out += (a[:, lo:hi] @ b[lo:hi, :]) % p
    return out % p


def lincomb(coeffs: np.ndarray, stack: np.ndarray, p: int) -> np.ndarray:
    """sum(coeffs[i] * stack[i]) % p over axis 0, chunked against overflow."""
    coeffs = np.asarray(coeffs, dtype=np.int64) % p
    stack = np.asarray(stack, dtype=np.int64)
    n = coeffs.shape[0]
    if n == 0:
        return np.zeros(stack.shape[1:], dtype=np.int64)
    chunk = max(1, (2**62) // max(1, (p - 1) ** 2))
    if chunk >= n:
        return np.tensordot(coeffs, stack, axes=(0, 0)) % p
    out = np.zeros(stack.shape[1:], dtype=np.int64)
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        out += np.tensordot(coeffs[lo:hi], stack[lo:hi], axes=(0, 0)) % p
    return out % p


def rref(arr: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (deterministic)."""
    a = (np.array(arr, dtype=_work_dtype(p)) % p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        touched = np.nonzero(col)[0]
        if touched.size:
            a[touched] = (a[touched] - np.outer(col[touched], a[r])) % p
        pivots.append(c)
        r += 1
    return a.astype(np.int64), tuple(pivots)


def rank(arr: np.ndarray, p: int) -> int:
    """Rank by forward elimination only (cheaper than a full rref)."""
    a = (np.array(arr, dtype=_work_dtype(p)) % p)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        below = np.nonzero(a[r + 1:, c])[0]
        if below.size:
            idx = below + r + 1
            inv = pow(int(a[r, c]), p - 2, p)
            factors = (a[idx, c] * inv) % p
            a[idx, c:] = (a[idx, c:] - factors[:, None] * a[r, c:]) % p
        r += 1
    return r


def kernel(arr: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Basis of the right kernel as columns, plus the free column indices.

    The column for free variable f has a 1 in row f, zeros in the other
    free rows, so coordinates of any kernel vector v are just v[free].
    """
    arr = np.asarray(arr, dtype=np.int64)
    red, pivots = rref(arr, p)
    cols = arr.shape[1]
    free = tuple(c for c in range(cols) if c not in set(pivots))
    k = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        k[f, j] = 1
        for i, c in enumerate(pivots):
            k[c, j] = (-red[i, f]) % p
    return k, free


def solve(arr: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Particular solution of arr @ x = b with free variables zero, or None."""
    arr = np.asarray(arr, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if b.ndim == 1:
        b = b[:, None]
    if arr.shape[0] != b.shape[0]:
        raise ShapeMismatchError(f"solve: {arr.shape} vs rhs {b.shape}")
    aug = np.hstack([arr, b % p])
    red, pivots = rref(aug, p)
    ncols = arr.shape[1]
    if any(c >= ncols for c in pivots):
        return None
    x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c, :] = red[i, ncols:]
    return x


def row_basis(arr: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Canonical (rref) basis of the row space, with pivot columns."""
    red, pivots = rref(arr, p)
    return red[: len(pivots)], pivots


def column_basis(arr: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis of the column space, returned as columns."""
    red, pivots = row_basis(np.asarray(arr, dtype=np.int64).T, p)
    return red.T


def reduce_mod_rowspace(rows: np.ndarray, pivots: tuple[int, ...],
                        vecs: np.ndarray, p: int) -> np.ndarray:
    """Reduce column vectors modulo a row space given in rref form.

    After reduction the pivot coordinates vanish, so the result is a
    canonical coset representative supported on the non-pivot rows.
    """
    if len(pivots) == 0:
        return vecs % p
    coeff = vecs[list(pivots), :] % p
    return (vecs - mat_mul(rows.T, coeff, p)) % p


def in_rowspace(rows: np.ndarray, pivots: tuple[int, ...],
                vecs: np.ndarray, p: int) -> bool:
    return not reduce_mod_rowspace(rows, pivots, np.asarray(vecs) % p, p).any()


_validated_moduli: set[int] = set()


class Matrix:
    """Immutable dense matrix over GF(p).

    Thin wrapper that carries the modulus with the entries and rejects
    cross-modulus arithmetic.  Empty shapes (0 x n, n x 0) are legal and
    behave as zero maps.
    """

    __slots__ = ("p", "a")

    def __init__(self, p: int, entries):
        self.p = int(p)
        if self.p not in _validated_moduli:
            check_modulus(self.p)
            _validated_moduli.add(self.p)
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ShapeMismatchError(f"matrix entries must be 2-d, got shape {a.shape}")
        a %= self.p
        a.flags.writeable = False
        self.a = a

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "Matrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "Matrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other)!r}")
        if other.p != self.p:
            raise FieldMismatchError(f"mixed moduli {self.p} and {other.p}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.p, mat_mul(self.a, other.a, self.p))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.a.shape != other.a.shape:
            raise ShapeMismatchError(f"add: {self.a.shape} vs {other.a.shape}")
        return Matrix(self.p, (self.a + other.a) % self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.a.shape != other.a.shape:
            raise ShapeMismatchError(f"sub: {self.a.shape} vs {other.a.shape}")
        return Matrix(self.p, (self.a - other.a) % self.p)

    def __neg__(self) -> "Matrix":
        return Matrix(self.p, (-self.a) % self.p)

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.p, (self.a * (int(c) % self.p)) % self.p)

    def transpose(self) -> "Matrix":
        return Matrix(self.p, self.a.T)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and other.p == self.p
                and other.a.shape == self.a.shape and bool((other.a == self.a).all()))

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def rank(self) -> int:
        return rank(self.a, self.p)

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        red, pivots = rref(self.a, self.p)
        return Matrix(self.p, red), pivots

    def tolist(self):
        return self.a.tolist()

    def __repr__(self):
        return f"Matrix(p={self.p}, {self.a.tolist()!r})"


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a deterministic basis of ker(m); count = cols - rank."""
    k, _ = kernel(m.a, m.p)
    return Matrix(m.p, k)


def solve_linear(m: Matrix, b: Matrix) -> Matrix | None:
    """X with m @ X = b (free variables zero), or None when unsolvable."""
    if m.p != b.p:
        raise FieldMismatchError(f"mixed moduli {m.p} and {b.p}")
    if m.rows != b.rows:
        raise ShapeMismatchError(f"solve_linear: {m.rows} rows vs rhs {b.rows}")
    x = solve(m.a, b.a, m.p)
    return None if x is None else Matrix(m.p, x)


def hstack(mats: list[Matrix]) -> Matrix:
    p = mats[0].p
    for m in mats:
        if m.p != p:
            raise FieldMismatchError("mixed moduli in hstack")
    return Matrix(p, np.hstack([m.a for m in mats]))


def vstack(mats: list[Matrix]) -> Matrix:
    p = mats[0].p
    for m in mats:
        if m.p != p:
            raise FieldMismatchError("mixed moduli in vstack")
    return Matrix(p, np.vstack([m.a for m in mats]))
