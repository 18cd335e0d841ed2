"""Equitable partitions, quotient (orbit) matrices and quotient-level codes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import codes
from .designs import PrecheckError, divisibility_precheck, is_sgdd
from .exactmat import IntMatrix, ShapeError, all_ones, identity
from .gf import Field
from .report import Verdict

__all__ = [
    "PartitionHypothesisError",
    "EquitablePartition",
    "QuotientMatrix",
    "block_partition",
    "singleton_partition",
    "verify_equitable",
    "quotient",
    "commutes_with_partition",
    "quotient_product_identity",
    "orbit_partition",
    "check_orbit_matrix_conditions",
    "sgdd_quotient_identity",
    "build_so_code_quotient",
    "build_lcd_code_quotient",
]


class PartitionHypothesisError(ValueError):
    """The partition does not satisfy a hypothesis needed by the operation."""


@dataclass(frozen=True)
class EquitablePartition:
    """Cells of 0..n-1.  Equitability is a property relative to a matrix, checked separately."""

    n: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        cells = tuple(tuple(sorted(int(x) for x in c)) for c in self.cells)
        if any(not c for c in cells):
            raise ValueError("partition cells must be nonempty")
        flat = [x for c in cells for x in c]
        if sorted(flat) != list(range(self.n)):
            raise ValueError(f"cells must partition 0..{self.n - 1} exactly once")
        object.__setattr__(self, "cells", cells)

    @property
    def t(self) -> int:
        return len(self.cells)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.cells], dtype=np.int64)

    @property
    def equal_sizes(self) -> bool:
        return len(set(self.sizes.tolist())) == 1

    @property
    def labels(self) -> np.ndarray:
        lab = np.empty(self.n, dtype=np.int64)
        for j, c in enumerate(self.cells):
            lab[list(c)] = j
        return lab

    @property
    def char_matrix(self) -> IntMatrix:
        c = np.zeros((self.n, self.t), dtype=np.int64)
        c[np.arange(self.n), self.labels] = 1
        return IntMatrix(c)


@dataclass(frozen=True)
class QuotientMatrix:
    matrix: IntMatrix
    partition: EquitablePartition

    @property
    def array(self) -> np.ndarray:
        return self.matrix.array


def block_partition(n: int, size: int) -> EquitablePartition:
    """Consecutive cells of ``size`` indices."""
    if size < 1 or n % size:
        raise ValueError(f"cell size {size} does not divide {n}")
    return EquitablePartition(n, tuple(tuple(range(s, s + size)) for s in range(0, n, size)))


def singleton_partition(n: int) -> EquitablePartition:
    return block_partition(n, 1)


def _check_size(m: IntMatrix, part: EquitablePartition) -> IntMatrix:
    m = IntMatrix(m)
    if m.shape != (part.n, part.n):
        raise ShapeError(f"matrix shape {m.shape} does not match partition of {part.n} points")
    return m


def _block_sums(m: IntMatrix, part: EquitablePartition) -> np.ndarray:
    return (m @ part.char_matrix).array


def verify_equitable(m: IntMatrix, part: EquitablePartition) -> Verdict:
    """Every block has constant row sums; witness is (cell_i, cell_j, row)."""
    m = _check_size(m, part)
    sums = _block_sums(m, part)
    for i, cell in enumerate(part.cells):
        rows = sums[list(cell)]
        bad = np.argwhere(rows != rows[0])
        if bad.size:
            r, j = (int(v) for v in bad[0])
            return Verdict(False, witness=(i, j, cell[r]), detail=f"row {cell[r]} of block ({i},{j}) sums to {rows[r, j]}, not {rows[0, j]}")
    return Verdict(True, detail=f"{part.t} cells, all blocks have constant row sums")


def _formula_quotient(m: IntMatrix, part: EquitablePartition) -> np.ndarray:
    """(C^T C)^{-1} C^T M C, exact; raises if a row does not divide evenly."""
    c = part.char_matrix
    num = (c.T @ m @ c).array
    sizes = part.sizes[:, None]
    if np.any(num % sizes):
        raise PartitionHypothesisError("C^T M C is not divisible by the cell sizes; partition is not equitable")
    return num // sizes


def quotient(m: IntMatrix, part: EquitablePartition) -> QuotientMatrix:
    m = _check_size(m, part)
    v = verify_equitable(m, part)
    if not v:
        raise PartitionHypothesisError(f"partition is not equitable: {v.detail}")
    sums = _block_sums(m, part)
    q = sums[[c[0] for c in part.cells]]
    if not np.array_equal(q, _formula_quotient(m, part)):
        raise AssertionError("block row sums disagree with (C^T C)^-1 C^T M C")
    return QuotientMatrix(IntMatrix(q), part)


def commutes_with_partition(m: IntMatrix, part: EquitablePartition) -> bool:
    """C C^T M^T = M^T C C^T."""
    m = _check_size(m, part)
    c = part.char_matrix
    cc = c @ c.T
    return cc @ m.T == m.T @ cc


def quotient_product_identity(m1: IntMatrix, m2: IntMatrix, part: EquitablePartition) -> Verdict:
    """M1' M2'^T = (C^T C)^{-1} C^T M1 M2^T C.

    Hypotheses (both matrices and M1 M2^T equitable) raise
    :class:`PartitionHypothesisError`; the identity itself returns a verdict.
    """
    m1, m2 = _check_size(m1, part), _check_size(m2, part)
    prod = m1 @ m2.T
    for name, mat in (("M1", m1), ("M2", m2), ("M1 M2^T", prod)):
        v = verify_equitable(mat, part)
        if not v:
            raise PartitionHypothesisError(f"partition is not equitable for {name}: {v.detail}")
    lhs = quotient(m1, part).matrix @ quotient(m2, part).matrix.T
    rhs = IntMatrix(_formula_quotient(prod, part))
    if lhs != rhs:
        r, c = (int(x) for x in np.argwhere(lhs.array != rhs.array)[0])
        return Verdict(False, witness=(r, c), detail=f"entry ({r},{c}): {lhs.array[r, c]} vs {rhs.array[r, c]}")
    return Verdict(True, detail=f"{part.t}x{part.t} identity holds")


def orbit_partition(n: int, generators: Sequence[Sequence[int]]) -> EquitablePartition:
    """Orbits of the group generated by permutations in image notation."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        g = [int(x) for x in g]
        if sorted(g) != list(range(n)):
            raise ValueError(f"generator {g} is not a permutation of 0..{n - 1}")
        for x, y in enumerate(g):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    cells: dict[int, list[int]] = {}
    for x in range(n):
        cells.setdefault(find(x), []).append(x)
    return EquitablePartition(n, tuple(tuple(c) for _, c in sorted(cells.items())))


def check_orbit_matrix_conditions(om: QuotientMatrix | IntMatrix, v: int, k: int, lam: int, omega: int) -> Verdict:
    """Row sums k and column inner products lambda*omega + delta*(k - lambda)."""
    g = om.matrix if isinstance(om, QuotientMatrix) else IntMatrix(om)
    if omega < 1 or v % omega:
        raise ShapeError(f"orbit length {omega} does not divide v={v}")
    t = v // omega
    if g.shape != (t, t):
        raise ShapeError(f"orbit matrix must be {t}x{t}, got {g.shape}")
    rows = g.row_sums()
    if np.any(rows != k):
        i = int(np.argwhere(rows != k)[0, 0])
        return Verdict(False, witness=("row", i), detail=f"row {i} sums to {rows[i]}, not {k}")
    gram = (g.T @ g).array
    want = lam * omega * np.ones((t, t), dtype=np.int64) + (k - lam) * np.eye(t, dtype=np.int64)
    if not np.array_equal(gram, want):
        j, s = (int(x) for x in np.argwhere(gram != want)[0])
        return Verdict(False, witness=("columns", j, s), detail=f"columns {j},{s}: {gram[j, s]} != {want[j, s]}")
    return Verdict(True, detail=f"t={t}, omega={omega}")


def sgdd_quotient_identity(a: IntMatrix, v: int, k: int, m: int, n: int, lambda1: int, lambda2: int) -> Verdict:
    """R R^T = (k^2 - lambda2 v) I_m + lambda2 n J_m for the canonical quotient R."""
    if not is_sgdd(a, v, k, m, n, lambda1, lambda2):
        raise PartitionHypothesisError("matrix is not an SGDD with the given parameters")
    r = quotient(a, block_partition(v, n)).matrix
    want = (k * k - lambda2 * v) * identity(m) + (lambda2 * n) * all_ones(m)
    return Verdict(r @ r.T == want, detail=f"m={m}")


def _quotient_family(family: Sequence[IntMatrix], part: EquitablePartition, field: Field) -> list[IntMatrix]:
    if not family:
        raise ValueError("empty matrix family")
    if not part.equal_sizes:
        raise PartitionHypothesisError(f"cells must have equal size, got sizes {sorted(set(part.sizes.tolist()))}")
    mats = [_check_size(m, part) for m in family]
    pre = divisibility_precheck(mats, field.p)
    if not pre:
        raise PrecheckError(f"p={field.p} does not divide every entry of M_i M_j^T", pre.witness)
    for i, m in enumerate(mats):
        if not commutes_with_partition(m, part):
            raise PartitionHypothesisError(f"C C^T does not commute with M_{i}^T")
    return [quotient(m, part).matrix for m in mats]


def build_so_code_quotient(
    family: Sequence[IntMatrix], part: EquitablePartition, field: Field, config: codes.SpanConfig = codes.SpanConfig()
) -> codes.SubspaceCode:
    """Self-orthogonal code from the quotients of ``family``.

    The quotients are checked again for divisibility before the span is
    enumerated (``config.precheck``).
    """
    return codes.build_so_code(_quotient_family(family, part, field), field, config)


def build_lcd_code_quotient(
    family: Sequence[IntMatrix], part: EquitablePartition, field: Field, config: codes.SpanConfig = codes.SpanConfig()
) -> codes.SubspaceCode:
    return codes.build_lcd_code(_quotient_family(family, part, field), field, config)
