"""Compiled Gauss-Jordan elimination over GF(q) on uint8 element indices.

``mode`` selects the addition rule: 1 = characteristic 2 (xor), 2 = prime
field (integer add mod p), 0 = lookup in ``add``.  In mode 1 the row updates
run on 64-bit words, so callers pad the column count to a multiple of 8.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _axpy(row, scaled, start, ncols, add, mode, p):
    if mode == 2:
        for j in range(start, ncols):
            t = row[j] + scaled[j]
            row[j] = t - p if t >= p else t
    else:
        for j in range(start, ncols):
            row[j] = add[row[j], scaled[j]]


@numba.njit(cache=True)
def rref_inplace(a, add, mul, neg, inv, mode, p):
    """Reduce ``a`` to RREF in place; return (rank, pivot columns)."""
    nrows, ncols = a.shape
    q = mul.shape[0]
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    scaled = np.empty((q, ncols), dtype=np.uint8)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        s = inv[a[r, c]]
        if s != 1:
            for j in range(c, ncols):
                a[r, j] = mul[s, a[r, j]]
        for f in range(q):
            for j in range(c, ncols):
                scaled[f, j] = neg[mul[f, a[r, j]]]
        for i in range(nrows):
            if i != r:
                f = a[i, c]
                if f != 0:
                    if mode == 1:
                        for j in range(c, ncols):
                            a[i, j] ^= scaled[f, j]
                    else:
                        _axpy(a[i], scaled[f], c, ncols, add, mode, p)
        pivots[r] = c
        r += 1
    return r, pivots[:r].copy()


@numba.njit(cache=True)
def _echelon_rank(a, add, mul, neg, inv, mode, p, scaled):
    """Rank by forward elimination; ``a`` is destroyed.

    ``a`` and ``scaled`` must be C-contiguous with a multiple of 8 columns.
    """
    nrows, ncols = a.shape
    q = mul.shape[0]
    words = a.view(np.uint64)
    swords = scaled.view(np.uint64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        s = inv[a[r, c]]
        lo = c - c % 8 if mode == 1 else c
        for f in range(1, q):
            g = mul[f, s]
            for j in range(lo, ncols):
                scaled[f, j] = neg[mul[g, a[r, j]]]
        if mode == 1:
            w0 = c // 8
            nw = ncols // 8
            for i in range(r + 1, nrows):
                f = a[i, c]
                if f != 0:
                    for w in range(w0, nw):
                        words[i, w] ^= swords[f, w]
        else:
            for i in range(r + 1, nrows):
                f = a[i, c]
                if f != 0:
                    _axpy(a[i], scaled[f], c, ncols, add, mode, p)
        r += 1
    return r


@numba.njit(cache=True)
def block_ranks(g, offsets, add, mul, neg, inv, mode, p):
    """Rank of each column block ``g[:, offsets[b]:offsets[b+1]]``."""
    nblocks = offsets.shape[0] - 1
    nrows = g.shape[0]
    out = np.empty(nblocks, dtype=np.int64)
    q = mul.shape[0]
    for b in range(nblocks):
        lo = offsets[b]
        hi = offsets[b + 1]
        width = hi - lo
        padded = width + (-width) % 8
        work = np.zeros((nrows, padded), dtype=np.uint8)
        work[:, :width] = g[:, lo:hi]
        scaled = np.zeros((q, padded), dtype=np.uint8)
        out[b] = _echelon_rank(work, add, mul, neg, inv, mode, p, scaled)
    return out


@numba.njit(cache=True)
def packed_block_ranks(packed, offsets, shift, contrib, add, mul, neg, inv, mode, p):
    """Like :func:`block_ranks` on a Kronecker-packed integer Gram matrix.

    Entry ``v`` holds polynomial coefficients in base ``2**shift`` digits;
    ``contrib[d, c]`` is the element index of ``c * x^d`` reduced in the field.
    """
    nblocks = offsets.shape[0] - 1
    nrows = packed.shape[0]
    ndigits = contrib.shape[0]
    mask = (np.int64(1) << shift) - 1
    out = np.empty(nblocks, dtype=np.int64)
    q = mul.shape[0]
    for b in range(nblocks):
        lo = offsets[b]
        hi = offsets[b + 1]
        width = hi - lo
        padded = width + (-width) % 8
        work = np.zeros((nrows, padded), dtype=np.uint8)
        for i in range(nrows):
            for j in range(width):
                v = packed[i, lo + j]
                idx = contrib[0, v & mask]
                for d in range(1, ndigits):
                    v >>= shift
                    c = contrib[d, v & mask]
                    if mode == 1:
                        idx ^= c
                    else:
                        idx = add[idx, c]
                work[i, j] = idx
        scaled = np.zeros((q, padded), dtype=np.uint8)
        out[b] = _echelon_rank(work, add, mul, neg, inv, mode, p, scaled)
    return out
