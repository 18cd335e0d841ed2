"""Finite fields GF(p^m) with table-driven arithmetic.

Elements are identified with integer indices ``sum(c_i * p**i)`` where
``(c_0, ..., c_{m-1})`` are the little-endian coefficients of the polynomial
representative.  The coefficient tuple doubles as the additive-group view
F_q ~ F_p^m.  Index order is the canonical element order used everywhere in
the package (``elements()[k]`` is the k-th field element).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldError",
    "Field",
    "FieldElement",
    "CONWAY_POLYNOMIALS",
    "make_field",
    "parse_field",
    "elem_op",
    "elem_inv",
    "to_vector",
    "from_vector",
    "is_prime",
]


class FieldError(ValueError):
    """Invalid field parameters, descriptor, or element."""


# Little-endian coefficients, monic.
CONWAY_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mod(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of ``num`` modulo monic ``den`` over F_p (little-endian)."""
    num = [c % p for c in num]
    d = len(den) - 1
    for top in range(len(num) - 1, d - 1, -1):
        c = num[top]
        if c:
            for k in range(d + 1):
                num[top - d + k] = (num[top - d + k] - c * den[k]) % p
    return num[:d] if d else []


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    m = len(poly) - 1
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not any(_poly_mod(list(poly), (*low, 1), p)):
                return False
    return True


@dataclass(frozen=True)
class Field:
    """GF(p^m) given by a prime, a degree and a monic irreducible polynomial."""

    p: int
    m: int = 1
    poly: tuple[int, ...] = dc_field(default=())

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")
        if self.m < 1:
            raise FieldError(f"extension degree m={self.m} must be >= 1")
        poly = tuple(int(c) for c in self.poly)
        if self.m == 1 and not poly:
            poly = (0, 1)
        if len(poly) != self.m + 1:
            raise FieldError(f"reduction polynomial must have {self.m + 1} coefficients, got {len(poly)}")
        if any(not 0 <= c < self.p for c in poly):
            raise FieldError(f"polynomial coefficients must lie in [0, {self.p})")
        if poly[-1] != 1:
            raise FieldError("reduction polynomial must be monic")
        if self.m > 1 and not _is_irreducible(poly, self.p):
            raise FieldError(f"polynomial {poly} is reducible over F_{self.p}")
        object.__setattr__(self, "poly", poly)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def order(self) -> int:
        return self.q

    @property
    def descriptor(self) -> str:
        base = f"{self.p}^{self.m}"
        if self.m == 1 or CONWAY_POLYNOMIALS.get((self.p, self.m)) == self.poly:
            return base
        return base + "/" + ",".join(map(str, self.poly))

    def __repr__(self) -> str:
        return f"GF({self.descriptor})"

    # -- tables ---------------------------------------------------------
    @cached_property
    def digits(self) -> np.ndarray:
        """(q, m) array: row k is the coefficient vector of element k."""
        idx = np.arange(self.q)
        out = np.stack([(idx // self.p**i) % self.p for i in range(self.m)], axis=1)
        out = out.astype(np.int64)
        out.setflags(write=False)
        return out

    def _index_of(self, coeffs: Iterable[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self.digits
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return self._pack(s)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._pack((-self.digits) % self.p)

    @cached_property
    def reduction_powers(self) -> np.ndarray:
        """(2m-1, m) array: row d holds the coefficients of x^d mod poly."""
        rows = []
        for d in range(2 * self.m - 1):
            mono = [0] * d + [1]
            rows.append(_poly_mod(mono, self.poly, self.p) if d >= self.m else mono + [0] * (self.m - d - 1))
        return np.array(rows, dtype=np.int64).reshape(2 * self.m - 1, self.m)

    @cached_property
    def mul_table(self) -> np.ndarray:
        d = self.digits
        conv = np.zeros((self.q, self.q, 2 * self.m - 1), dtype=np.int64)
        for i in range(self.m):
            for j in range(self.m):
                conv[:, :, i + j] += d[:, None, i] * d[None, :, j]
        red = conv @ self.reduction_powers % self.p
        return self._pack(red)

    @cached_property
    def inv_table(self) -> np.ndarray:
        mul = self.mul_table
        inv = np.zeros(self.q, dtype=np.uint8)
        for a in range(1, self.q):
            (b,) = np.nonzero(mul[a] == 1)
            inv[a] = b[0]
        inv.setflags(write=False)
        return inv

    def _pack(self, vecs: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(self.m)
        out = (vecs @ weights).astype(np.uint8)
        out.setflags(write=False)
        return out

    # -- elements -------------------------------------------------------
    def __call__(self, n: int) -> FieldElement:
        """Image of the integer ``n`` in the prime subfield."""
        return FieldElement(self, int(n) % self.p)

    def element(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise FieldError(f"element index {index} out of range for {self!r}")
        return FieldElement(self, int(index))

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, k) for k in range(self.q)]

    def nonzero(self) -> list[FieldElement]:
        return [FieldElement(self, k) for k in range(1, self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.value])

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed-field operands {self.field!r} and {other.field!r}")
            return other.value
        return int(other) % self.field.p

    def __add__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement(self.field, int(self.field.add_table[self.value, self._other(other)]))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, int(self.field.neg_table[self.value]))

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        neg = self.field.neg_table[self._other(other)]
        return FieldElement(self.field, int(self.field.add_table[self.value, neg]))

    def __rsub__(self, other: int) -> FieldElement:
        return -self + other

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement(self.field, int(self.field.mul_table[self.value, self._other(other)]))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return FieldElement(self.field, int(self.field.inv_table[self.value]))

    def __truediv__(self, other: FieldElement | int) -> FieldElement:
        o = FieldElement(self.field, self._other(other))
        return self * o.inverse()

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.field.one, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        if self.field.m == 1:
            return str(self.value)
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(coef + mono)
        return "+".join(reversed(terms)) or "0"

    def __repr__(self) -> str:
        return f"{self.field!r}({self})"


def make_field(p: int, m: int = 1, poly: Sequence[int] | None = None) -> Field:
    """Build GF(p^m), consulting the built-in polynomial table when ``poly`` is omitted."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if poly is None:
        if m == 1:
            return Field(p, 1)
        try:
            poly = CONWAY_POLYNOMIALS[(p, m)]
        except KeyError:
            raise FieldError(f"no built-in polynomial for q={p}^{m}; supply one explicitly") from None
    return Field(p, m, tuple(poly))


_DESCRIPTOR = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*(?:/\s*([\d,\s]+))?\s*$")


def parse_field(text: str) -> Field:
    """Parse ``"p^m"`` or ``"p^m/c0,c1,...,cm"``."""
    match = _DESCRIPTOR.match(text)
    if not match:
        raise FieldError(f"bad field descriptor {text!r}; expected 'p^m' or 'p^m/c0,...,cm'")
    p, m = int(match.group(1)), int(match.group(2))
    poly = None
    if match.group(3):
        poly = [int(c) for c in match.group(3).split(",") if c.strip()]
    return make_field(p, m, poly)


def elem_op(field: Field, op: str, a: FieldElement, b: FieldElement) -> FieldElement:
    for e in (a, b):
        if e.field != field:
            raise FieldError(f"operand {e!r} does not belong to {field!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def elem_inv(field: Field, a: FieldElement) -> FieldElement:
    if a.field != field:
        raise FieldError(f"operand {a!r} does not belong to {field!r}")
    return a.inverse()


def to_vector(a: FieldElement) -> tuple[int, ...]:
    return a.coeffs


def from_vector(field: Field, v: Sequence[int]) -> FieldElement:
    if len(v) != field.m:
        raise FieldError(f"vector length {len(v)} != extension degree {field.m}")
    if any(not 0 <= int(c) < field.p for c in v):
        raise FieldError(f"vector entries must lie in [0, {field.p})")
    return FieldElement(field, field._index_of(v))
