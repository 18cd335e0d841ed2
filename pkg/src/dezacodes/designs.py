"""Verifiers for the matrix families that feed the span constructions.

Weighing matrices and quasi-unbiased pairs, orthogonal designs with integer
substitution, symmetric designs, symmetric group divisible designs (SGDDs),
linked systems of either, and the prime-divisibility precheck.  Linked-system
matrices are keyed by 0-based index pairs (i, j), i != j.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from .exactmat import IntMatrix, ShapeError, all_ones, identity, kron
from .report import Verdict

__all__ = [
    "PrecheckError",
    "divisibility_precheck",
    "WeighingParams",
    "is_weighing",
    "are_quasi_unbiased",
    "verify_mquwm",
    "four_squares",
    "SymbolicODMatrix",
    "verify_orthogonal_design",
    "substitute",
    "quaternion_od",
    "is_symmetric_design",
    "is_sgdd",
    "sgdd_group_matrix",
    "LinkedSystem",
    "verify_linked_system",
    "linked_system_family",
    "sylvester_hadamard",
    "difference_set_incidence",
    "hadamard_matrices",
    "find_unbiased_hadamard_pair",
    "MQUWMRow",
    "LSDRow",
    "SGDDRow",
    "TABLE_MQUWM",
    "TABLE_SGDD",
    "TABLE_SGDD2",
    "lsd_params",
]


class PrecheckError(ValueError):
    """A prime fails to divide some entry of M_i M_j^T; ``witness`` locates it."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message if witness is None else f"{message}; witness (i, j, row, col, value) = {witness}")
        self.witness = witness


def divisibility_precheck(family: Sequence[IntMatrix], p: int) -> Verdict:
    """Does p divide every entry of M_i M_j^T for all ordered pairs (i = j included)?"""
    mats = [IntMatrix(m) for m in family]
    if not mats:
        return Verdict(True, detail="empty family")
    n = mats[0].rows
    for i, m in enumerate(mats):
        if m.shape != (n, n):
            raise ShapeError(f"family member {i} has shape {m.shape}, expected ({n}, {n})")
    for i, j in itertools.product(range(len(mats)), repeat=2):
        prod = (mats[i] @ mats[j].T).array
        bad = np.argwhere(prod % p)
        if bad.size:
            r, c = (int(v) for v in bad[0])
            return Verdict(False, witness=(i, j, r, c, int(prod[r, c])), detail=f"M_{i} M_{j}^T[{r},{c}] = {prod[r, c]}")
    return Verdict(True, detail=f"p={p} divides all {len(mats) ** 2} products")


# ---------------------------------------------------------------------------
# Weighing matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeighingParams:
    n: int
    k: int
    l: int | None = None
    a: int | None = None

    def __post_init__(self) -> None:
        if self.a is None:
            return
        if self.a <= 0 or (self.k * self.k) % self.a:
            raise ValueError(f"l = k^2/a must be an integer (k={self.k}, a={self.a})")
        want = self.k * self.k // self.a
        if self.l is None:
            object.__setattr__(self, "l", want)
        elif self.l != want:
            raise ValueError(f"l={self.l} differs from k^2/a = {want}")

    @property
    def sqrt_a(self) -> int:
        r = math.isqrt(self.a)
        if r * r != self.a:
            raise ValueError(f"a={self.a} is not a perfect square")
        return r


def _signed_entries(w: IntMatrix) -> None:
    if not np.isin(w.array, (-1, 0, 1)).all():
        raise ValueError("weighing matrices have entries in {-1, 0, 1}")


def is_weighing(w: IntMatrix, k: int) -> bool:
    w = IntMatrix(w)
    _signed_entries(w)
    if not w.is_square():
        return False
    return w @ w.T == k * identity(w.rows)


def are_quasi_unbiased(w1: IntMatrix, w2: IntMatrix, params: WeighingParams) -> Verdict:
    w1, w2 = IntMatrix(w1), IntMatrix(w2)
    s = params.sqrt_a
    for name, w in (("W1", w1), ("W2", w2)):
        if w.shape != (params.n, params.n) or not is_weighing(w, params.k):
            return Verdict(False, detail=f"{name} is not a weighing matrix of order {params.n}, weight {params.k}")
    prod = (w1 @ w2.T).array
    bad = np.argwhere(prod % s)
    if bad.size:
        r, c = (int(v) for v in bad[0])
        return Verdict(False, witness=(r, c, int(prod[r, c])), detail=f"entry {prod[r, c]} not divisible by {s}")
    w = prod // s
    if not np.isin(w, (-1, 0, 1)).all():
        return Verdict(False, detail=f"W1 W2^T / {s} has entries outside {{-1,0,1}}")
    if not is_weighing(IntMatrix(w), params.l):
        return Verdict(False, detail=f"W1 W2^T / {s} is not a weighing matrix of weight {params.l}")
    return Verdict(True, detail=f"W1 W2^T = {s} W with W of weight {params.l}")


def verify_mquwm(mats: Sequence[IntMatrix], params: WeighingParams) -> Verdict:
    if len(mats) < 2:
        raise ValueError("mutual quasi-unbiasedness needs at least two matrices")
    for i, j in itertools.combinations(range(len(mats)), 2):
        v = are_quasi_unbiased(mats[i], mats[j], params)
        if not v:
            return Verdict(False, witness=(i, j), detail=f"pair ({i},{j}): {v.detail}")
    return Verdict(True, detail=f"{len(mats)} matrices pairwise quasi-unbiased")


def four_squares(p: int) -> tuple[int, int, int, int]:
    """Non-increasing (n1..n4) with p = sum n_i^2; all-positive when possible, else lexicographically smallest."""
    if p < 1:
        raise ValueError("four_squares needs p >= 1")
    sols = []
    r = math.isqrt(p)
    for a in range(r + 1):
        for b in range(a + 1):
            for c in range(b + 1):
                rest = p - a * a - b * b - c * c
                if rest < 0:
                    continue
                d = math.isqrt(rest)
                if d * d == rest and d <= c:
                    sols.append((a, b, c, d))
    positive = [s for s in sols if s[3] > 0]
    return min(positive or sols)


# ---------------------------------------------------------------------------
# Orthogonal designs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicODMatrix:
    """Entries are signed indeterminate indices: 0 is zero, +-u is +-x_u (u >= 1)."""

    entries: np.ndarray
    type: tuple[int, ...]

    def __post_init__(self) -> None:
        e = np.array(self.entries, dtype=np.int64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ShapeError(f"an orthogonal design is square, got shape {e.shape}")
        if e.size and np.abs(e).max() > len(self.type):
            raise ValueError(f"entry references x_{np.abs(e).max()} but only {len(self.type)} indeterminates are declared")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "type", tuple(int(s) for s in self.type))

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def indicator(self, u: int) -> np.ndarray:
        """Signed (0,+-1) pattern of x_u."""
        e = self.entries
        return np.where(np.abs(e) == u, np.sign(e), 0)


def verify_orthogonal_design(d: SymbolicODMatrix) -> Verdict:
    """D D^T = (sum s_u x_u^2) I as a polynomial identity."""
    pats = [d.indicator(u) for u in range(1, len(d.type) + 1)]
    eye = np.eye(d.order, dtype=np.int64)
    for u, pu in enumerate(pats):
        diag = pu @ pu.T
        if not np.array_equal(diag, d.type[u] * eye):
            r, c = (int(v) for v in np.argwhere(diag != d.type[u] * eye)[0])
            return Verdict(False, witness=(r, c, f"x{u + 1}^2"), detail=f"coefficient of x{u + 1}^2 at ({r},{c}) is {diag[r, c]}")
        for w in range(u + 1, len(pats)):
            cross = pu @ pats[w].T + pats[w] @ pu.T
            if cross.any():
                r, c = (int(v) for v in np.argwhere(cross)[0])
                return Verdict(False, witness=(r, c, f"x{u + 1}x{w + 1}"),
                               detail=f"cross term x{u + 1}x{w + 1} at ({r},{c}) has coefficient {cross[r, c]}")
    return Verdict(True, detail=f"OD({d.order};{','.join(map(str, d.type))})")


def substitute(d: SymbolicODMatrix, values: Sequence[int]) -> IntMatrix:
    if len(values) != len(d.type):
        raise ValueError(f"need {len(d.type)} values, got {len(values)}")
    lookup = np.concatenate([[0], np.asarray(values, dtype=np.int64)])
    e = d.entries
    return IntMatrix(np.sign(e) * lookup[np.abs(e)])


def quaternion_od() -> SymbolicODMatrix:
    """OD(4;1,1,1,1) from quaternion multiplication."""
    return SymbolicODMatrix(
        np.array([[1, 2, 3, 4], [-2, 1, -4, 3], [-3, 4, 1, -2], [-4, -3, 2, 1]]),
        (1, 1, 1, 1),
    )


# ---------------------------------------------------------------------------
# Symmetric designs and SGDDs
# ---------------------------------------------------------------------------


def _square_binary(a: IntMatrix, v: int) -> IntMatrix:
    a = IntMatrix(a)
    if a.shape != (v, v):
        raise ShapeError(f"expected a {v}x{v} incidence matrix, got {a.shape}")
    if not a.is_binary():
        raise ValueError("incidence matrices are (0,1)-matrices")
    return a


def is_symmetric_design(a: IntMatrix, v: int, k: int, lam: int) -> bool:
    a = _square_binary(a, v)
    return a @ a.T == (k - lam) * identity(v) + lam * all_ones(v)


def sgdd_group_matrix(m: int, n: int) -> IntMatrix:
    """I_m (x) J_n: groups are consecutive blocks of n indices."""
    return kron(identity(m), all_ones(n))


def _sgdd_gram(v: int, k: int, m: int, n: int, l1: int, l2: int) -> IntMatrix:
    if v != m * n:
        raise ValueError(f"SGDD parameters need v = m n, got v={v}, m={m}, n={n}")
    g = sgdd_group_matrix(m, n)
    eye = identity(v)
    return k * eye + l1 * (g - eye) + l2 * (all_ones(v) - g)


def is_sgdd(a: IntMatrix, v: int, k: int, m: int, n: int, lambda1: int, lambda2: int) -> bool:
    want = _sgdd_gram(v, k, m, n, lambda1, lambda2)
    a = _square_binary(a, v)
    return a @ a.T == want


# ---------------------------------------------------------------------------
# Linked systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinkedSystem:
    """A_{i,j} for 0 <= i != j < f.

    ``kind`` is "symmetric" with params (v, k, lambda), or "sgdd" / "sgdd2"
    with params (v, k, m, n, lambda1, lambda2).  ``sigma``/``tau`` may be left
    as None and are then read off the first triple.  ``rho`` is used by "sgdd2".
    """

    f: int
    matrices: Mapping[tuple[int, int], IntMatrix] = dc_field(repr=False)
    kind: str
    params: tuple[int, ...]
    sigma: int | None = None
    tau: int | None = None
    rho: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("symmetric", "sgdd", "sgdd2"):
            raise ValueError(f"unknown linked-system kind {self.kind!r}")
        need = 3 if self.kind == "symmetric" else 6
        if len(self.params) != need:
            raise ValueError(f"{self.kind} linked systems take {need} parameters, got {len(self.params)}")
        if self.kind == "sgdd2" and self.rho is None:
            raise ValueError("type II linked systems need rho")
        object.__setattr__(self, "matrices", {k: IntMatrix(m) for k, m in self.matrices.items()})

    @property
    def v(self) -> int:
        return self.params[0]

    def __getitem__(self, key: tuple[int, int]) -> IntMatrix:
        return self.matrices[key]


def _triple_rhs(ls: LinkedSystem, a: IntMatrix, sigma: int, tau: int) -> IntMatrix:
    j = all_ones(ls.v)
    if ls.kind == "sgdd2":
        _, _, m, n, _, _ = ls.params
        g = sgdd_group_matrix(m, n)
        return sigma * a + tau * (j - a - g) + ls.rho * g
    return sigma * a + tau * (j - a)


def _infer_sigma_tau(ls: LinkedSystem, prod: np.ndarray, a: np.ndarray) -> tuple[int, int]:
    on = prod[a == 1]
    off_mask = a == 0
    if ls.kind == "sgdd2":
        _, _, m, n, _, _ = ls.params
        off_mask &= sgdd_group_matrix(m, n).array == 0
    off = prod[off_mask]
    sigma = int(on[0]) if on.size else 0
    tau = int(off[0]) if off.size else 0
    return sigma, tau


def verify_linked_system(ls: LinkedSystem) -> Verdict:
    f, v = ls.f, ls.v
    pairs = [(i, j) for i in range(f) for j in range(f) if i != j]
    for key in pairs:
        if key not in ls.matrices:
            raise KeyError(f"linked system is missing A_{key[0]},{key[1]}")
    for i, j in pairs:
        a = ls[i, j]
        if a.shape != (v, v) or not a.is_binary():
            return Verdict(False, witness=(i, j), detail=f"A_{i},{j} is not a {v}x{v} (0,1)-matrix")
        if a.T != ls[j, i]:
            return Verdict(False, witness=(i, j), detail=f"A_{i},{j}^T differs from A_{j},{i}")
    if ls.kind == "symmetric":
        _, k, lam = ls.params
        pair_rhs = (k - lam) * identity(v) + lam * all_ones(v)
    else:
        pair_rhs = _sgdd_gram(*ls.params)
    for i, j in pairs:
        if i < j and ls[i, j] @ ls[j, i] != pair_rhs:
            return Verdict(False, witness=(i, j), detail=f"pair condition fails for ({i},{j})")
    sigma, tau = ls.sigma, ls.tau
    for i, j, s in itertools.permutations(range(f), 3):
        prod = ls[i, j] @ ls[j, s]
        if sigma is None or tau is None:
            sigma, tau = _infer_sigma_tau(ls, prod.array, ls[i, s].array)
        if prod != _triple_rhs(ls, ls[i, s], sigma, tau):
            return Verdict(False, witness=(i, j, s), detail=f"triple condition fails for ({i},{j},{s})")
    detail = f"f={f}"
    if f >= 3:
        detail += f" sigma={sigma} tau={tau}" + (f" rho={ls.rho}" if ls.kind == "sgdd2" else "")
    return Verdict(True, witness=(sigma, tau), detail=detail)


def linked_system_family(ls: LinkedSystem) -> list[IntMatrix]:
    """{A_{j,0} : j != 0}; pairwise products reduce to the pair and triple conditions."""
    return [ls[j, 0] for j in range(1, ls.f)]


# ---------------------------------------------------------------------------
# Small built-in instances
# ---------------------------------------------------------------------------


def sylvester_hadamard(order: int) -> IntMatrix:
    if order < 1 or order & (order - 1):
        raise ValueError(f"Sylvester construction needs a power of two, got {order}")
    h = np.array([[1]], dtype=np.int64)
    base = np.array([[1, 1], [1, -1]], dtype=np.int64)
    while h.shape[0] < order:
        h = np.kron(base, h)
    return IntMatrix(h)


def difference_set_incidence(v: int, ds: Sequence[int]) -> IntMatrix:
    """Row i is the block ds + i (mod v)."""
    first = np.zeros(v, dtype=np.int64)
    first[[d % v for d in ds]] = 1
    return IntMatrix(np.stack([np.roll(first, i) for i in range(v)]))


def hadamard_matrices(order: int) -> np.ndarray:
    """All +-1 matrices H of the given order with H H^T = order I (exhaustive)."""
    n = order
    if n * n > 20:
        raise ValueError("exhaustive Hadamard enumeration is limited to order <= 4")
    rows = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int64)
    gram = rows @ rows.T
    out = []
    for combo in itertools.product(range(len(rows)), repeat=n):
        sub = gram[np.ix_(combo, combo)]
        if np.array_equal(sub, n * np.eye(n, dtype=np.int64)):
            out.append(rows[list(combo)])
    return np.array(out)


def find_unbiased_hadamard_pair(order: int = 4) -> tuple[IntMatrix, IntMatrix]:
    """First pair (H1, H2) in enumeration order with H1 H2^T = sqrt(order) H, H Hadamard."""
    hs = hadamard_matrices(order)
    s = math.isqrt(order)
    if s * s != order:
        raise ValueError("unbiased Hadamard pairs need a square order")
    for i, h1 in enumerate(hs):
        prods = np.einsum("ab,kcb->kac", h1, hs)
        ok = np.all(np.abs(prods) == s, axis=(1, 2))
        hits = np.nonzero(ok)[0]
        if hits.size:
            return IntMatrix(h1), IntMatrix(hs[hits[0]])
    raise LookupError(f"no unbiased Hadamard pair of order {order}")


# ---------------------------------------------------------------------------
# Parameter tables (existence results are cited, not constructed)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MQUWMRow:
    n: int
    k: int
    l: int
    a: int
    primes: tuple[int, ...]


@dataclass(frozen=True)
class LSDRow:
    v: int
    k: int
    lam: int
    sigma: int
    tau: int


@dataclass(frozen=True)
class SGDDRow:
    v: int
    k: int
    m: int
    n: int
    lambda1: int
    lambda2: int
    sigma: int
    tau: int
    primes: tuple[int, ...]
    rho: int | None = None

    def counting_identity(self) -> bool:
        """k^2 = k + lambda1 (n - 1) + lambda2 n (m - 1)."""
        return self.k**2 == self.k + self.lambda1 * (self.n - 1) + self.lambda2 * self.n * (self.m - 1)


def _mquwm_rows() -> tuple[MQUWMRow, ...]:
    rows = [MQUWMRow(2 ** (2 * t + 1), 2 ** (2 * t + 1), 2 ** (2 * t), 2 ** (2 * t + 2), (2,)) for t in (1, 2, 3)]
    orders = [8, 11, 13] + [2 * d for d in range(5, 13) if d != 8]
    rows += [MQUWMRow(n, 4, 4, 4, (2,)) for n in orders]
    rows += [
        MQUWMRow(8, 8, 4, 16, (2,)),
        MQUWMRow(12, 12, 9, 16, (2,)),
        MQUWMRow(16, 16, 4, 64, (2,)),
        MQUWMRow(24, 24, 4, 144, (2, 3)),
        MQUWMRow(24, 24, 9, 64, (2,)),
        MQUWMRow(32, 32, 4, 256, (2,)),
        MQUWMRow(48, 48, 4, 576, (2, 3)),
        MQUWMRow(48, 48, 9, 256, (2,)),
        MQUWMRow(48, 48, 36, 64, (2,)),
    ]
    return tuple(rows)


TABLE_MQUWM = _mquwm_rows()

TABLE_SGDD = (
    SGDDRow(56, 28, 7, 8, 12, 14, 16, 12, (2,)),
    SGDDRow(108, 36, 36, 3, 0, 12, 16, 10, (2,)),
    SGDDRow(132, 66, 11, 12, 30, 33, 36, 30, (3,)),
)

TABLE_SGDD2 = (SGDDRow(378, 117, 14, 27, 36, 36, 42, 33, (3,), rho=39),)


def lsd_params(n: int) -> LSDRow:
    """Linked symmetric designs on 4n^2 points (n even)."""
    if n % 2:
        raise ValueError("the 4n^2 family needs even n")
    return LSDRow(4 * n * n, 2 * n * n - n, n * n - n, n * n - n // 2, n * n - 3 * n // 2)
