"""Exact dense matrices over Z (checked int64) and over GF(q).

``IntMatrix`` refuses any operation whose result could leave the signed 64-bit
range; the bound is computed from the operands before the arithmetic runs.
``FqMatrix`` stores element indices (see :mod:`dezacodes.gf`) and multiplies
through float64 BLAS whenever the exact integer result is provably below 2**53.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .gf import Field, FieldElement, FieldError

__all__ = [
    "ShapeError",
    "IntMatrix",
    "FqMatrix",
    "RrefResult",
    "Subspace",
    "circulant",
    "back_identity",
    "shift",
    "identity",
    "all_ones",
    "zeros",
    "kron",
    "kron_all",
    "matmul",
    "transpose",
    "reduce_mod",
    "rref",
    "rank",
    "is_nonsingular",
    "block_ranks",
    "row_space",
    "fq_matmul",
    "kernel_mode",
    "gram_is_zero",
    "pairwise_gram_ranks",
]

INT64_MAX = 2**63 - 1
_FLOAT_EXACT = 2**53


class ShapeError(ValueError):
    """Operands are not conformable."""


def _magnitude(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return max(int(a.max()), -int(a.min()))


def _checked(bound: int, what: str) -> None:
    if bound > INT64_MAX:
        raise OverflowError(f"{what} may exceed the int64 range (bound {bound})")


class IntMatrix:
    """Immutable dense integer matrix with overflow-checked arithmetic."""

    __slots__ = ("_a",)

    def __init__(self, data: Iterable | np.ndarray):
        if isinstance(data, IntMatrix):
            arr = data._a
        else:
            src = np.asarray(data)
            if src.dtype.kind == "O" or (src.dtype.kind == "u" and src.dtype.itemsize >= 8):
                flat = [int(x) for x in src.ravel()]
                for x in flat:
                    _checked(abs(x), "entry")
                arr = np.array(flat, dtype=np.int64).reshape(src.shape)
            elif src.dtype.kind in "iub" or src.size == 0:
                arr = src.astype(np.int64)
            else:
                raise TypeError(f"IntMatrix needs integer entries, got dtype {src.dtype}")
            if arr.ndim != 2:
                raise ShapeError(f"expected a 2-D array, got shape {arr.shape}")
            arr.setflags(write=False)
        self._a = arr

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return identity(n)

    # -- views ----------------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a.ravel())

    def __getitem__(self, key):
        out = self._a[key]
        if np.ndim(out) == 0:
            return int(out)
        return out

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self._a.T)

    def transpose(self) -> IntMatrix:
        return self.T

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and bool(np.array_equal(self._a, self._a.T))

    def is_binary(self) -> bool:
        return bool(np.all((self._a == 0) | (self._a == 1)))

    def row_sums(self) -> np.ndarray:
        return self._a.sum(axis=1)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> IntMatrix:
        return other if isinstance(other, IntMatrix) else IntMatrix(other)

    def __add__(self, other) -> IntMatrix:
        other = self._coerce(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        _checked(_magnitude(self._a) + _magnitude(other._a), "sum")
        return IntMatrix(self._a + other._a)

    def __sub__(self, other) -> IntMatrix:
        other = self._coerce(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        _checked(_magnitude(self._a) + _magnitude(other._a), "difference")
        return IntMatrix(self._a - other._a)

    def __neg__(self) -> IntMatrix:
        _checked(_magnitude(self._a), "negation")
        return IntMatrix(-self._a)

    def __mul__(self, c: int) -> IntMatrix:
        if isinstance(c, IntMatrix):
            raise TypeError("use @ for matrix products; * is scalar multiplication")
        c = int(c)
        _checked(abs(c) * _magnitude(self._a), "scalar product")
        return IntMatrix(self._a * c)

    __rmul__ = __mul__

    def __matmul__(self, other) -> IntMatrix:
        other = self._coerce(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        bound = _magnitude(self._a) * _magnitude(other._a) * self.cols
        _checked(bound, "product")
        if bound < _FLOAT_EXACT:
            prod = self._a.astype(np.float64) @ other._a.astype(np.float64)
            return IntMatrix(np.rint(prod).astype(np.int64))
        return IntMatrix(self._a @ other._a)

    def __pow__(self, e: int) -> IntMatrix:
        if not self.is_square():
            raise ShapeError("matrix power needs a square matrix")
        if e < 0:
            raise ValueError("negative powers are not supported")
        out, base = identity(self.rows), self
        while e:
            if e & 1:
                out = out @ base
            e >>= 1
            if e:
                base = base @ base
        return out

    def kron(self, other) -> IntMatrix:
        return kron(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"IntMatrix({self._a.tolist()!r})" if self._a.size <= 36 else f"IntMatrix<{self.rows}x{self.cols}>"


def identity(n: int) -> IntMatrix:
    if n < 1:
        raise ValueError("order must be >= 1")
    return IntMatrix(np.eye(n, dtype=np.int64))


def zeros(rows: int, cols: int | None = None) -> IntMatrix:
    return IntMatrix(np.zeros((rows, rows if cols is None else cols), dtype=np.int64))


def all_ones(rows: int, cols: int | None = None) -> IntMatrix:
    if rows < 1:
        raise ValueError("order must be >= 1")
    return IntMatrix(np.ones((rows, rows if cols is None else cols), dtype=np.int64))


def circulant(first_row: Sequence[int]) -> IntMatrix:
    """Row i is ``first_row`` cyclically shifted right by i places."""
    row = np.asarray(list(first_row), dtype=np.int64)
    if row.size == 0:
        raise ValueError("circulant needs a nonempty first row")
    n = row.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return IntMatrix(row[idx])


def back_identity(n: int) -> IntMatrix:
    if n < 1:
        raise ValueError("order must be >= 1")
    return IntMatrix(np.eye(n, dtype=np.int64)[::-1])


def shift(n: int) -> IntMatrix:
    """Circulant with first row (0, 1, 0, ..., 0); for n = 1 this is [1]."""
    if n < 1:
        raise ValueError("order must be >= 1")
    first = [0] * n
    first[1 % n] = 1
    return circulant(first)


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    a, b = IntMatrix(a), IntMatrix(b)
    _checked(_magnitude(a.array) * _magnitude(b.array), "Kronecker product")
    return IntMatrix(np.kron(a.array, b.array))


def kron_all(factors: Sequence[IntMatrix]) -> IntMatrix:
    return reduce(kron, factors)


def matmul(a, b):
    return a @ b


def transpose(a):
    return a.T


# ---------------------------------------------------------------------------
# Matrices over GF(q)
# ---------------------------------------------------------------------------


def kernel_mode(field: Field) -> int:
    if field.p == 2:
        return 1
    if field.m == 1:
        return 2
    return 0


def _kernel_args(field: Field):
    return (field.add_table, field.mul_table, field.neg_table, field.inv_table, kernel_mode(field), field.p)


def fq_matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of index arrays over ``field``; exact, BLAS-backed when safe."""
    inner = a.shape[1]
    p, m = field.p, field.m
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    if m == 1:
        bound = inner * (p - 1) ** 2
        if bound < _FLOAT_EXACT:
            prod = a.astype(np.float64) @ b.astype(np.float64)
            return np.fmod(prod, p).astype(np.uint8)
        return ((a.astype(np.int64) @ b.astype(np.int64)) % p).astype(np.uint8)
    digits = field.digits
    coef_bound = inner * (p - 1) ** 2 * m
    base = 1 << int(coef_bound).bit_length()
    if base ** (2 * m - 1) <= _FLOAT_EXACT:
        # Kronecker substitution: pack each polynomial into one integer.
        weights = np.array([float(base**i) for i in range(m)])
        enc = digits @ weights
        packed = np.rint(enc[a] @ enc[b]).astype(np.int64)
        width = base.bit_length() - 1
        coeffs = np.empty((2 * m - 1,) + packed.shape, dtype=np.int64)
        for d in range(2 * m - 1):
            coeffs[d] = packed & (base - 1)
            packed >>= width
    else:
        da, db = digits[a].astype(np.float64), digits[b].astype(np.float64)
        coeffs = np.zeros((2 * m - 1, a.shape[0], b.shape[1]), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                coeffs[i + j] += np.rint(da[..., i] @ db[..., j]).astype(np.int64)
    coeffs %= p
    red = np.tensordot(field.reduction_powers, coeffs, axes=([0], [0])) % p
    weights = p ** np.arange(m)
    return np.tensordot(weights, red, axes=([0], [0])).astype(np.uint8)


class FqMatrix:
    """Immutable dense matrix over a finite field (entries are element indices)."""

    __slots__ = ("field", "_a")

    def __init__(self, field: Field, data: Iterable | np.ndarray):
        if isinstance(data, FqMatrix):
            if data.field != field:
                raise FieldError("matrix belongs to a different field")
            arr = data._a
        else:
            src = np.asarray(data)
            if src.ndim != 2:
                if src.size == 0:
                    src = src.reshape(0, 0)
                else:
                    raise ShapeError(f"expected a 2-D array, got shape {src.shape}")
            if src.size and (src.min() < 0 or src.max() >= field.q):
                raise FieldError(f"entries must be element indices in [0, {field.q})")
            arr = src.astype(np.uint8, copy=True)
            arr.setflags(write=False)
        self.field = field
        self._a = arr

    @classmethod
    def from_elements(cls, field: Field, rows: Sequence[Sequence[FieldElement | int]]) -> FqMatrix:
        data = [[e.value if isinstance(e, FieldElement) else field(e).value for e in row] for row in rows]
        return cls(field, np.array(data, dtype=np.int64).reshape(len(data), -1 if data else 0))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> FqMatrix:
        return cls(field, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, field: Field, n: int) -> FqMatrix:
        return cls(field, np.eye(n, dtype=np.uint8))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, int(self._a[i, j]))

    def is_zero(self) -> bool:
        return not self._a.any()

    def _same_field(self, other: FqMatrix) -> None:
        if not isinstance(other, FqMatrix):
            raise TypeError(f"expected FqMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field!r} vs {other.field!r}")

    @property
    def T(self) -> FqMatrix:
        return FqMatrix(self.field, self._a.T)

    def transpose(self) -> FqMatrix:
        return self.T

    def __add__(self, other: FqMatrix) -> FqMatrix:
        self._same_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return FqMatrix(self.field, self.field.add_table[self._a, other._a])

    def __neg__(self) -> FqMatrix:
        return FqMatrix(self.field, self.field.neg_table[self._a])

    def __sub__(self, other: FqMatrix) -> FqMatrix:
        return self + (-other)

    def __mul__(self, c: FieldElement | int) -> FqMatrix:
        if isinstance(c, FqMatrix):
            raise TypeError("use @ for matrix products; * is scalar multiplication")
        if isinstance(c, FieldElement):
            if c.field != self.field:
                raise FieldError("scalar from a different field")
            v = c.value
        else:
            v = int(c) % self.field.p
        return FqMatrix(self.field, self.field.mul_table[v][self._a])

    __rmul__ = __mul__

    def __matmul__(self, other: FqMatrix) -> FqMatrix:
        self._same_field(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return FqMatrix(self.field, fq_matmul(self.field, self._a, other._a))

    def hstack(self, other: FqMatrix) -> FqMatrix:
        self._same_field(other)
        return FqMatrix(self.field, np.hstack([self._a, other._a]))

    def vstack(self, other: FqMatrix) -> FqMatrix:
        self._same_field(other)
        if self.cols != other.cols:
            raise ShapeError(f"cannot stack {self.shape} on {other.shape}")
        return FqMatrix(self.field, np.vstack([self._a, other._a]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        if self._a.size <= 36:
            return f"FqMatrix({self.field!r}, {self._a.tolist()!r})"
        return f"FqMatrix<{self.field!r}, {self.rows}x{self.cols}>"


def reduce_mod(a: IntMatrix, field: Field) -> FqMatrix:
    """Entrywise image under Z -> F_p, embedded in GF(p^m) via the prime subfield."""
    return FqMatrix(field, np.mod(IntMatrix(a).array, field.p))


@dataclass(frozen=True)
class RrefResult:
    rref: FqMatrix
    rank: int
    pivot_cols: tuple[int, ...]


def rref(a: FqMatrix) -> RrefResult:
    work = np.array(a.array, dtype=np.uint8, copy=True)
    if work.size == 0:
        return RrefResult(FqMatrix(a.field, work), 0, ())
    r, piv = _kernels.rref_inplace(work, *_kernel_args(a.field))
    return RrefResult(FqMatrix(a.field, work), int(r), tuple(int(c) for c in piv))


def rank(a: FqMatrix) -> int:
    if a.array.size == 0:
        return 0
    offsets = np.array([0, a.cols], dtype=np.int64)
    return int(_kernels.block_ranks(np.ascontiguousarray(a.array), offsets, *_kernel_args(a.field))[0])


def block_ranks(field: Field, g: np.ndarray, offsets: Sequence[int]) -> np.ndarray:
    """Ranks of consecutive column blocks of the index array ``g``."""
    return _kernels.block_ranks(
        np.ascontiguousarray(g, dtype=np.uint8), np.asarray(offsets, dtype=np.int64), *_kernel_args(field)
    )


def is_nonsingular(a: FqMatrix) -> bool:
    if a.rows != a.cols:
        raise ShapeError(f"nonsingularity needs a square matrix, got {a.shape}")
    return rank(a) == a.rows


class Subspace:
    """A subspace of F_q^n stored by its canonical RREF basis."""

    __slots__ = ("field", "ambient_dim", "basis", "_key")

    def __init__(self, basis: FqMatrix, *, _canonical: bool = False):
        if not _canonical:
            res = rref(basis)
            basis = FqMatrix(basis.field, res.rref.array[: res.rank])
        self.field = basis.field
        self.ambient_dim = basis.cols
        self.basis = basis
        self._key = (self.field, self.ambient_dim, basis.array.tobytes())

    @classmethod
    def zero(cls, field: Field, n: int) -> Subspace:
        return cls(FqMatrix.zeros(field, 0, n), _canonical=True)

    @classmethod
    def full(cls, field: Field, n: int) -> Subspace:
        return cls(FqMatrix.identity(field, n), _canonical=True)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field!r})"


def row_space(a: FqMatrix) -> Subspace:
    return Subspace(a)


def gram_is_zero(field: Field, stacked: np.ndarray, chunk: int = 512) -> tuple[int, int] | None:
    """First (row, col) with a nonzero entry of ``S S^T`` over ``field``, else None."""
    s = np.ascontiguousarray(stacked, dtype=np.uint8)
    st = np.ascontiguousarray(s.T)
    for lo in range(0, s.shape[0], chunk):
        g = fq_matmul(field, s[lo : lo + chunk], st)
        nz = np.argwhere(g)
        if nz.size:
            return int(nz[0, 0]) + lo, int(nz[0, 1])
    return None


def _digit_table(field: Field, base: int) -> np.ndarray:
    """``t[d, c]`` = element index of ``c * x^d`` in ``field`` for c < base."""
    p, m = field.p, field.m
    weights = p ** np.arange(m)
    mono = field.reduction_powers @ weights  # index of x^d
    c = np.arange(base) % p
    t = field.mul_table[mono[:, None], c[None, :]]
    return np.ascontiguousarray(t, dtype=np.uint8)


def pairwise_gram_ranks(field: Field, bases: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix ``r`` with ``r[i, j] = rank(B_i B_j^T)`` over ``field`` (symmetric).

    All bases share a column count.  Each row block of the stacked Gram matrix
    is formed once against the bases j >= i and ranked block by block.
    """
    k = len(bases)
    out = np.zeros((k, k), dtype=np.int64)
    if k == 0:
        return out
    dims = np.array([b.shape[0] for b in bases], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(dims)])
    stacked = np.ascontiguousarray(np.vstack(bases), dtype=np.uint8)
    n = stacked.shape[1]
    p, m = field.p, field.m
    args = _kernel_args(field)
    packed_enc = None
    if m > 1:
        base = 1 << int(n * (p - 1) ** 2 * m).bit_length()
        if base ** (2 * m - 1) <= _FLOAT_EXACT:
            weights = np.array([float(base**i) for i in range(m)])
            packed_enc = field.digits @ weights
            enc_all = np.ascontiguousarray(packed_enc[stacked].T)
            shift_bits = base.bit_length() - 1
            contrib = _digit_table(field, base)
    elif n * (p - 1) ** 2 < _FLOAT_EXACT:
        enc_all = np.ascontiguousarray(stacked.astype(np.float64).T)
    for i in range(k):
        if dims[i] == 0:
            continue
        lo, hi = offsets[i], offsets[i + 1]
        rel = (offsets[i:] - lo).astype(np.int64)
        if m > 1 and packed_enc is not None:
            prod = np.rint(packed_enc[stacked[lo:hi]] @ enc_all[:, lo:]).astype(np.int64)
            ranks = _kernels.packed_block_ranks(prod, rel, shift_bits, contrib, *args)
        elif m == 1 and n * (p - 1) ** 2 < _FLOAT_EXACT:
            prod = np.fmod(stacked[lo:hi].astype(np.float64) @ enc_all[:, lo:], p).astype(np.uint8)
            ranks = _kernels.block_ranks(prod, rel, *args)
        else:
            prod = fq_matmul(field, stacked[lo:hi], np.ascontiguousarray(stacked[lo:].T))
            ranks = _kernels.block_ranks(prod, rel, *args)
        out[i, i:] = ranks
        out[i:, i] = ranks
    return out
