"""Slow, independent reference implementations used only by the tests.

Nothing here imports the package's arithmetic: finite fields are done with
pure-Python polynomial arithmetic and ranks with textbook elimination.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np


class PolyField:
    """GF(p^m) from a monic modulus, element k <-> little-endian digits of k in base p."""

    def __init__(self, p: int, poly: Sequence[int]):
        self.p, self.poly, self.m = p, list(poly), len(poly) - 1
        self.q = p**self.m

    def digits(self, k: int) -> list[int]:
        return [(k // self.p**i) % self.p for i in range(self.m)]

    def index(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def add(self, a: int, b: int) -> int:
        return self.index([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        return self.index([-x for x in self.digits(a)])

    def mul(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        # long division by the monic modulus
        for top in range(len(prod) - 1, self.m - 1, -1):
            c = prod[top] % self.p
            if c:
                for k, pk in enumerate(self.poly):
                    prod[top - self.m + k] -= c * pk
        return self.index(prod[: self.m])

    def inv(self, a: int) -> int:
        for b in range(1, self.q):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError

    def matmul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for i in range(a.shape[0]):
            for j in range(b.shape[1]):
                acc = 0
                for k in range(a.shape[1]):
                    acc = self.add(acc, self.mul(int(a[i, k]), int(b[k, j])))
                out[i, j] = acc
        return out

    def rank(self, a) -> int:
        rows = [list(map(int, r)) for r in np.asarray(a)]
        if not rows:
            return 0
        ncols = len(rows[0])
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            s = self.inv(rows[r][c])
            rows[r] = [self.mul(s, x) for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    f = self.neg(rows[i][c])
                    rows[i] = [self.add(x, self.mul(f, y)) for x, y in zip(rows[i], rows[r])]
            r += 1
        return r


def gf2_rank(a) -> int:
    """Rank over GF(2) with rows packed into Python integers."""
    basis: list[int] = []
    for row in np.asarray(a) % 2:
        v = int("".join(str(int(x)) for x in row) or "0", 2)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def all_subspaces_gf2(n: int) -> list[frozenset[int]]:
    """Every subspace of F_2^n as the frozenset of its vectors (ints)."""
    seen = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for s in frontier:
            for v in range(1, 2**n):
                if v in s:
                    continue
                t = frozenset(s | {x ^ v for x in s})
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def common_neighbour_params(adj) -> tuple[int, int, int, int] | None:
    a = np.asarray(adj)
    n = a.shape[0]
    degs = {int(a[i].sum()) for i in range(n)}
    if len(degs) != 1:
        return None
    vals = set()
    for x in range(n):
        for y in range(x + 1, n):
            vals.add(sum(1 for z in range(n) if a[x, z] and a[z, y]))
    if len(vals) > 2:
        return None
    return n, degs.pop(), max(vals), min(vals)


def intersection_numbers_bruteforce(adjs) -> np.ndarray:
    mats = [np.asarray(getattr(a, "array", a)) for a in adjs]
    n = mats[0].shape[0]
    d1 = len(mats)
    rel = np.zeros((n, n), dtype=int)
    for k, a in enumerate(mats):
        rel[a == 1] = k
    out = np.full((d1, d1, d1), -1, dtype=np.int64)
    for x, y in itertools.product(range(n), repeat=2):
        k = rel[x, y]
        for i in range(d1):
            for j in range(d1):
                c = sum(1 for z in range(n) if rel[x, z] == i and rel[z, y] == j)
                if out[i, j, k] == -1:
                    out[i, j, k] = c
                elif out[i, j, k] != c:
                    raise AssertionError("not an association scheme")
    return out


def hadamard_bruteforce(n: int = 4) -> list[np.ndarray]:
    """All +-1 n x n matrices with H H^T = n I, by scanning every sign pattern."""
    out = []
    for bits in range(2 ** (n * n)):
        h = np.array([1 if (bits >> t) & 1 else -1 for t in range(n * n)]).reshape(n, n)
        if np.array_equal(h @ h.T, n * np.eye(n, dtype=int)):
            out.append(h)
    return out


def rank_mod_p(a, p: int) -> int:
    """Rank over the prime field F_p by row reduction on int64 arrays."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = np.nonzero(m[r:, c])[0]
        if piv.size == 0:
            continue
        i = r + piv[0]
        m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        r += 1
        if r == rows:
            break
    return r


def distinct_row_spaces_mod_p(mats, p: int) -> list[int]:
    """Indices of the first occurrence of each distinct nonzero row space."""
    reps: list[int] = []
    for i, x in enumerate(mats):
        rx = rank_mod_p(x, p)
        if rx == 0:
            continue
        if not any(rx == rank_mod_p(mats[j], p) == rank_mod_p(np.vstack([x, mats[j]]), p) for j in reps):
            reps.append(i)
    return reps
