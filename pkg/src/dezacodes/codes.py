"""Subspace codes over GF(q): distances, duals, and the span constructions.

Given integer matrices M_1..M_k whose pairwise products M_i M_j^T vanish mod p,
every nonzero X in their F_q-span has X X^T = 0 over F_q.  The row spaces of
such X form a self-orthogonal code, and the row spaces of [X | alpha I] form
an LCD code.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from .designs import PrecheckError, divisibility_precheck
from .exactmat import (
    FqMatrix,
    IntMatrix,
    ShapeError,
    Subspace,
    gram_is_zero,
    pairwise_gram_ranks,
    rank,
    reduce_mod,
    rref,
)
from .gf import Field
from .report import Verdict

__all__ = [
    "EmptySpanError",
    "SpanTooLargeError",
    "SpanConfig",
    "SubspaceCode",
    "subspace_distance",
    "injection_distance",
    "intersection_dim",
    "min_distance",
    "closest_pair",
    "dual",
    "meets_dual_trivially",
    "projective_count",
    "span_elements",
    "build_so_code",
    "build_lcd_code",
    "is_self_orthogonal",
    "is_lcd",
    "PrecheckError",
]

SPAN_CAP = 10**6


class EmptySpanError(ValueError):
    """Every span element reduces to the zero matrix."""


class SpanTooLargeError(ValueError):
    """Exhaustive span enumeration would exceed the representative cap."""


@dataclass(frozen=True)
class SpanConfig:
    """How to walk the span: exhaustively (``sample=None``) or by random draws."""

    cap: int = SPAN_CAP
    sample: int | None = None
    seed: int = 0
    precheck: bool = True


@dataclass(frozen=True)
class SubspaceCode:
    field: Field
    ambient_dim: int
    members: tuple[Subspace, ...]
    skipped_zero: int = 0
    exhaustive: bool = True
    generators: tuple = dc_field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.members)) != len(self.members):
            raise ValueError("code members must be pairwise distinct")
        for u in self.members:
            if u.field != self.field or u.ambient_dim != self.ambient_dim:
                raise ShapeError(f"member {u!r} does not live in GF({self.field.descriptor})^{self.ambient_dim}")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def dimensions(self) -> list[int]:
        return [u.dim for u in self.members]

    @classmethod
    def from_subspaces(cls, subspaces: Sequence[Subspace], **kw) -> SubspaceCode:
        """Deduplicate (keeping first occurrences) and wrap."""
        if not subspaces:
            raise ValueError("a subspace code needs at least one member")
        seen: dict[Subspace, None] = {}
        for u in subspaces:
            seen.setdefault(u, None)
        first = subspaces[0]
        return cls(first.field, first.ambient_dim, tuple(seen), **kw)


def _same_space(u: Subspace, w: Subspace) -> None:
    if u.field != w.field:
        raise ShapeError(f"subspaces over different fields: {u.field!r} vs {w.field!r}")
    if u.ambient_dim != w.ambient_dim:
        raise ShapeError(f"ambient dimension mismatch: {u.ambient_dim} vs {w.ambient_dim}")


def _sum_dim(u: Subspace, w: Subspace) -> int:
    _same_space(u, w)
    return rank(u.basis.vstack(w.basis))


def intersection_dim(u: Subspace, w: Subspace) -> int:
    return u.dim + w.dim - _sum_dim(u, w)


def subspace_distance(u: Subspace, w: Subspace) -> int:
    """dim(U+W) - dim(U cap W)."""
    s = _sum_dim(u, w)
    return 2 * s - u.dim - w.dim


def injection_distance(u: Subspace, w: Subspace) -> int:
    """max(dim U, dim W) - dim(U cap W)."""
    s = _sum_dim(u, w)
    return max(u.dim, w.dim) - (u.dim + w.dim - s)


def closest_pair(code: SubspaceCode) -> tuple[int, int, int]:
    """(d, i, j) with d the minimum subspace distance, achieved first at members i < j."""
    ms = code.members
    if len(ms) < 2:
        raise ValueError(f"minimum distance needs at least 2 members, code has {len(ms)}")
    best = None
    for i, j in itertools.combinations(range(len(ms)), 2):
        d = subspace_distance(ms[i], ms[j])
        if best is None or d < best[0]:
            best = (d, i, j)
    return best


def min_distance(code: SubspaceCode) -> int:
    return closest_pair(code)[0]


def dual(u: Subspace) -> Subspace:
    """Orthogonal complement under the standard bilinear form."""
    field, n = u.field, u.ambient_dim
    if u.dim == 0:
        return Subspace.full(field, n)
    res = rref(u.basis)
    pivots = list(res.pivot_cols)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return Subspace.zero(field, n)
    r = res.rref.array
    neg = field.neg_table
    ker = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        ker[k, f] = 1
        for row, pc in enumerate(pivots):
            ker[k, pc] = neg[r[row, f]]
    return Subspace(FqMatrix(field, ker))


def meets_dual_trivially(u: Subspace, w: Subspace) -> bool:
    """U cap W^perp = 0, tested as rank([B_U; dual basis of W]) = dim U + n - dim W."""
    _same_space(u, w)
    d = dual(w)
    return rank(u.basis.vstack(d.basis)) == u.dim + d.dim


# ---------------------------------------------------------------------------
# Span enumeration
# ---------------------------------------------------------------------------


def projective_count(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def _projective_vectors(q: int, k: int) -> Iterator[tuple[int, ...]]:
    """Nonzero vectors of F_q^k whose first nonzero coordinate is 1 (element index)."""
    for lead in range(k):
        for tail in itertools.product(range(q), repeat=k - 1 - lead):
            yield (0,) * lead + (1,) + tail


def _sampled_vectors(field: Field, k: int, count: int, seed: int) -> Iterator[tuple[int, ...]]:
    rng = np.random.default_rng(seed)
    inv, mul = field.inv_table, field.mul_table
    for _ in range(count):
        v = rng.integers(0, field.q, size=k)
        while not v.any():
            v = rng.integers(0, field.q, size=k)
        s = inv[v[np.nonzero(v)[0][0]]]
        yield tuple(int(mul[s, c]) for c in v)


def span_elements(
    family: Sequence[FqMatrix], field: Field, config: SpanConfig = SpanConfig()
) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Yield (coefficients, X) over projective representatives of the span."""
    k = len(family)
    arrays = [f.array for f in family]
    if config.sample is None:
        total = projective_count(field.q, k)
        if total > config.cap:
            raise SpanTooLargeError(
                f"{total} projective representatives exceed the cap {config.cap}; pass a sample size to draw randomly"
            )
        vectors = _projective_vectors(field.q, k)
    else:
        vectors = _sampled_vectors(field, k, config.sample, config.seed)
    add, mul = field.add_table, field.mul_table
    for coeffs in vectors:
        x = np.zeros_like(arrays[0])
        for c, a in zip(coeffs, arrays):
            if c == 0:
                continue
            term = a if c == 1 else mul[c][a]
            x = add[x, term]
        yield coeffs, x


def _prepare(family: Sequence[IntMatrix], field: Field, config: SpanConfig) -> list[FqMatrix]:
    if not family:
        raise ValueError("empty matrix family")
    family = [IntMatrix(m) for m in family]
    n = family[0].rows
    for i, m in enumerate(family):
        if m.shape != (n, n):
            raise ShapeError(f"family member {i} has shape {m.shape}, expected ({n}, {n})")
    if config.precheck:
        verdict = divisibility_precheck(family, field.p)
        if not verdict:
            raise PrecheckError(f"p={field.p} does not divide every entry of M_i M_j^T", verdict.witness)
    return [reduce_mod(m, field) for m in family]


def _collect(family, field, config, augment: bool):
    red = _prepare(family, field, config)
    n = red[0].rows
    subspaces: list[Subspace] = []
    gens: list[tuple] = []
    skipped = 0
    eye = np.eye(n, dtype=np.uint8)
    for coeffs, x in span_elements(red, field, config):
        if not x.any():
            skipped += 1
            continue
        if augment:
            for alpha in range(1, field.q):
                subspaces.append(Subspace(FqMatrix(field, np.hstack([x, eye * np.uint8(alpha)]))))
                gens.append((coeffs, alpha))
        else:
            subspaces.append(Subspace(FqMatrix(field, x)))
            gens.append((coeffs,))
    if not subspaces:
        raise EmptySpanError("every span element reduces to the zero matrix over " + repr(field))
    if skipped:
        warnings.warn(f"skipped {skipped} span element(s) that vanish mod {field.p}", stacklevel=3)
    seen: dict[Subspace, tuple] = {}
    for u, g in zip(subspaces, gens):
        seen.setdefault(u, g)
    return SubspaceCode(
        field,
        subspaces[0].ambient_dim,
        tuple(seen),
        skipped_zero=skipped,
        exhaustive=config.sample is None,
        generators=tuple(seen.values()),
    )


def build_so_code(family: Sequence[IntMatrix], field: Field, config: SpanConfig = SpanConfig()) -> SubspaceCode:
    """Row spaces of the nonzero span elements of ``family`` over ``field``."""
    return _collect(family, field, config, augment=False)


def build_lcd_code(family: Sequence[IntMatrix], field: Field, config: SpanConfig = SpanConfig()) -> SubspaceCode:
    """Row spaces of [X | alpha I] for nonzero span elements X and nonzero alpha."""
    return _collect(family, field, config, augment=True)


# ---------------------------------------------------------------------------
# Checkers
# ---------------------------------------------------------------------------


def _member_of_row(code: SubspaceCode, row: int) -> int:
    offsets = np.cumsum([u.dim for u in code.members])
    return int(np.searchsorted(offsets, row, side="right"))


def is_self_orthogonal(code: SubspaceCode) -> Verdict:
    """G_i G_j^T = 0 for every ordered pair (including i = j)."""
    bases = [u.basis.array for u in code.members if u.dim]
    if not bases:
        return Verdict(True, detail="all members are zero")
    hit = gram_is_zero(code.field, np.vstack(bases))
    if hit is None:
        return Verdict(True, detail=f"{len(code)} members, all Gram blocks vanish")
    i, j = _member_of_row(code, hit[0]), _member_of_row(code, hit[1])
    return Verdict(False, witness=(i, j), detail=f"G_{i} G_{j}^T is nonzero")


def is_lcd(code: SubspaceCode) -> Verdict:
    """C_i cap C_j^perp = 0 for every ordered pair, via rank(G_i G_j^T) = dim C_i."""
    dims = np.array(code.dimensions, dtype=np.int64)
    ranks = pairwise_gram_ranks(code.field, [u.basis.array for u in code.members])
    bad = np.argwhere(ranks != dims[:, None])
    if bad.size:
        i, j = (int(v) for v in bad[0])
        return Verdict(False, witness=(i, j), detail=f"rank(G_{i} G_{j}^T) = {ranks[i, j]} < dim C_{i} = {dims[i]}")
    return Verdict(True, detail=f"{len(code)} members, every Gram block has full rank")
