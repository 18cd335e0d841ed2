"""Association schemes from adjacency matrices and the divisibility gate for span codes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from . import codes
from .designs import PrecheckError
from .exactmat import IntMatrix, ShapeError, identity
from .gf import Field
from .report import Verdict

__all__ = [
    "SchemeAxiomError",
    "AssociationScheme",
    "verify_scheme",
    "corollary_gate",
    "bose_mesner_code",
    "complete_graph_scheme",
    "petersen_graph",
    "petersen_scheme",
    "directed_triangle_scheme",
]


class SchemeAxiomError(ValueError):
    def __init__(self, axiom: int, message: str, witness: tuple | None = None):
        super().__init__(f"axiom {axiom}: {message}" + ("" if witness is None else f" (witness {witness})"))
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True)
class AssociationScheme:
    n: int
    adjacencies: tuple[IntMatrix, ...] = dc_field(repr=False)
    intersection: np.ndarray = dc_field(repr=False)
    transpose_map: tuple[int, ...]
    commutative: bool
    symmetric: bool

    @property
    def d(self) -> int:
        return len(self.adjacencies) - 1

    @property
    def valencies(self) -> list[int]:
        return [int(a.array[0].sum()) for a in self.adjacencies]

    def p(self, i: int, j: int, k: int) -> int:
        """Intersection number p_{ij}^k."""
        return int(self.intersection[i, j, k])

    def intersection_matrix(self, i: int) -> np.ndarray:
        """B_i with (j, k) entry p_{ij}^k."""
        return self.intersection[i].copy()


def verify_scheme(adjacencies: Sequence[IntMatrix], require_commutative: bool = False) -> AssociationScheme:
    mats = [IntMatrix(a) for a in adjacencies]
    if not mats:
        raise ValueError("a scheme needs at least A_0")
    n = mats[0].rows
    for i, a in enumerate(mats):
        if a.shape != (n, n):
            raise ShapeError(f"A_{i} has shape {a.shape}, expected ({n}, {n})")
        if not a.is_binary():
            raise ValueError(f"A_{i} is not a (0,1)-matrix")
    if mats[0] != identity(n):
        raise SchemeAxiomError(1, "A_0 is not the identity")
    stack = np.stack([a.array for a in mats])
    cover = stack.sum(axis=0)
    if np.any(cover != 1):
        r, c = (int(v) for v in np.argwhere(cover != 1)[0])
        raise SchemeAxiomError(2, f"relations do not partition X x X at ({r},{c}) (covered {cover[r, c]} times)", (r, c))
    for i, a in enumerate(mats):
        if not a.array.any():
            raise SchemeAxiomError(2, f"relation R_{i} is empty", (i,))
    label = np.argmax(stack, axis=0)  # relation index of each pair
    tmap = []
    for i, a in enumerate(mats):
        hit = [j for j, b in enumerate(mats) if a.T == b]
        if not hit:
            raise SchemeAxiomError(3, f"A_{i}^T is not an adjacency matrix of the scheme", (i,))
        tmap.append(hit[0])
    d1 = len(mats)
    reps = [tuple(int(v) for v in np.argwhere(a.array)[0]) for a in mats]
    inter = np.zeros((d1, d1, d1), dtype=np.int64)
    for i, j in itertools.product(range(d1), repeat=2):
        prod = (mats[i] @ mats[j]).array
        for k in range(d1):
            inter[i, j, k] = prod[reps[k]]
        if not np.array_equal(prod, inter[i, j][label]):
            r, c = (int(v) for v in np.argwhere(prod != inter[i, j][label])[0])
            k = int(label[r, c])
            raise SchemeAxiomError(
                4, f"(A_{i} A_{j}) is not constant on R_{k}: {prod[r, c]} at ({r},{c}) vs {inter[i, j, k]}", (i, j, k)
            )
    commutative = bool(np.array_equal(inter, inter.transpose(1, 0, 2)))
    if require_commutative and not commutative:
        i, j, k = (int(v) for v in np.argwhere(inter != inter.transpose(1, 0, 2))[0])
        raise SchemeAxiomError(5, f"p_{i}{j}^{k} = {inter[i, j, k]} but p_{j}{i}^{k} = {inter[j, i, k]}", (i, j, k))
    inter.setflags(write=False)
    return AssociationScheme(
        n, tuple(mats), inter, tuple(tmap), commutative, all(t == i for i, t in enumerate(tmap))
    )


def corollary_gate(scheme: AssociationScheme, index_set: Iterable[int], p: int) -> Verdict:
    """p divides p_{x,y'}^k for all x, y in the index set and every k."""
    idx = sorted(set(int(i) for i in index_set))
    for i in idx:
        if not 0 <= i <= scheme.d:
            raise ValueError(f"class index {i} outside 0..{scheme.d}")
    for x, y in itertools.product(idx, repeat=2):
        yp = scheme.transpose_map[y]
        row = scheme.intersection[x, yp]
        bad = np.nonzero(row % p)[0]
        if bad.size:
            k = int(bad[0])
            return Verdict(False, witness=(x, y, k, int(row[k])), detail=f"p_{{{x},{yp}}}^{k} = {row[k]} is not divisible by {p}")
    return Verdict(True, detail=f"p={p} divides p_(x,y')^k for I={idx}")


def bose_mesner_code(
    scheme: AssociationScheme,
    index_set: Iterable[int],
    field: Field,
    partition=None,
    config: codes.SpanConfig = codes.SpanConfig(),
) -> codes.SubspaceCode:
    """Self-orthogonal span code of {A_i : i in I}, or of their quotients under ``partition``."""
    idx = sorted(set(int(i) for i in index_set))
    if not idx:
        raise ValueError("empty index set gives an empty matrix family")
    if not scheme.commutative:
        raise SchemeAxiomError(5, "the span construction needs a commutative scheme")
    gate = corollary_gate(scheme, idx, field.p)
    if not gate:
        raise PrecheckError(f"gate fails: {gate.detail}", gate.witness)
    family = [scheme.adjacencies[i] for i in idx]
    if partition is not None:
        from .partitions import build_so_code_quotient

        return build_so_code_quotient(family, partition, field, config)
    return codes.build_so_code(family, field, config)


# ---------------------------------------------------------------------------
# Small schemes
# ---------------------------------------------------------------------------


def complete_graph_scheme(n: int) -> AssociationScheme:
    eye = identity(n)
    return verify_scheme([eye, IntMatrix(np.ones((n, n), dtype=np.int64)) - eye])


def petersen_graph() -> IntMatrix:
    """Kneser graph K(5,2): 2-subsets of {0..4}, adjacent when disjoint."""
    verts = list(itertools.combinations(range(5), 2))
    a = np.array([[int(not set(u) & set(v)) for v in verts] for u in verts], dtype=np.int64)
    return IntMatrix(a)


def petersen_scheme() -> AssociationScheme:
    a = petersen_graph()
    eye = identity(10)
    comp = IntMatrix(np.ones((10, 10), dtype=np.int64)) - eye - a
    return verify_scheme([eye, a, comp])


def directed_triangle_scheme() -> AssociationScheme:
    c = IntMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    return verify_scheme([identity(3), c, c.T])
