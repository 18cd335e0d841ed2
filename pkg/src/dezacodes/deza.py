"""Deza graphs from finite fields and their decomposition family.

For q = p^m the family (N_alpha), alpha in F_q, consists of symmetric (0,1)
matrices of order q^2 (2q+3).  Each N_alpha is built from

* U, the cyclic shift of order p, and R, the back-identity of order p;
* C_{a,alpha}: q^2 x q^2 blocks indexed by a in F_q and two extra symbols
  ``X`` and ``Y``;
* P_a = V^phi(a) + V^-phi(a), with V the shift of order 2q+3.

Exponents of U are read off the additive vector view of a field element.  The
inner exponent of C_{a,alpha} is the vector view of the field element
``a*c + alpha`` (field product, not a componentwise one).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Union

import numpy as np

from .exactmat import IntMatrix, all_ones, back_identity, identity, kron, kron_all, shift, zeros
from .gf import Field, FieldElement
from .report import Check

__all__ = [
    "X",
    "Y",
    "Symbol",
    "NotDezaError",
    "LemmaMismatch",
    "DezaParams",
    "Skeleton",
    "DezaFamily",
    "expected_params",
    "build_C",
    "build_D",
    "build_skeleton",
    "build_family",
    "verify_deza",
    "check_commutativity",
    "lemma_cd_product",
    "theorem_square_M",
    "lemma_ur_checks",
    "lemma_cd_checks",
    "run_suite",
]

X = "x"
Y = "y"
Symbol = Union[FieldElement, str]


class NotDezaError(ValueError):
    """The matrix is not the adjacency matrix of a Deza graph."""


class LemmaMismatch(AssertionError):
    """A product identity of the construction failed (construction bug)."""


@dataclass(frozen=True)
class DezaParams:
    n: int
    k: int
    b: int
    a: int

    def __post_init__(self) -> None:
        if not (self.n > self.k >= self.b >= self.a >= 0):
            raise ValueError(f"inconsistent Deza parameters {self.astuple()}")

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.n, self.k, self.b, self.a)


def expected_params(q: int) -> DezaParams:
    return DezaParams(q * q * (2 * q + 3), 2 * q * (q + 1), 3 * q, 2 * q)


def _element(field: Field, e: Symbol | int) -> Symbol:
    if isinstance(e, str):
        if e not in (X, Y):
            raise ValueError(f"unknown symbol {e!r}; use a field element, 'x' or 'y'")
        return e
    if isinstance(e, FieldElement):
        if e.field != field:
            raise ValueError(f"{e!r} does not belong to {field!r}")
        return e
    return field.element(int(e))


@lru_cache(maxsize=None)
def _u_power(p: int, e: int) -> IntMatrix:
    return shift(p) ** (e % p)


@lru_cache(maxsize=None)
def _tensor_u(field: Field, value: int, with_r: bool) -> IntMatrix:
    """Kronecker product over the coordinates of U^{v_i} (times R if requested)."""
    r = back_identity(field.p)
    factors = []
    for c in field.digits[value]:
        u = _u_power(field.p, int(c))
        factors.append(u @ r if with_r else u)
    return kron_all(factors)


@lru_cache(maxsize=None)
def _block(field: Field, a: Symbol, alpha: FieldElement, with_r: bool) -> IntMatrix:
    q = field.q
    if a == X:
        return zeros(q * q)
    if a == Y:
        return kron(_tensor_u(field, alpha.value, with_r), all_ones(q))
    total = np.zeros((q * q, q * q), dtype=np.int64)
    for c in field.elements():
        inner = a * c + alpha
        total += kron(_tensor_u(field, c.value, with_r), _tensor_u(field, inner.value, with_r)).array
    return IntMatrix(total)


def build_C(field: Field, a: Symbol | int, alpha: FieldElement | int) -> IntMatrix:
    """The q^2 x q^2 block C_{a,alpha} (products of U^e R factors)."""
    return _block(field, _element(field, a), _element(field, alpha), True)


def build_D(field: Field, a: Symbol | int, alpha: FieldElement | int) -> IntMatrix:
    """Same shape as :func:`build_C` without the R factors."""
    return _block(field, _element(field, a), _element(field, alpha), False)


@dataclass(frozen=True)
class Skeleton:
    """Circulant layout of order 2q+3 and its permutation pieces."""

    field: Field
    first_row: tuple[Symbol, ...]
    phi: dict
    P: dict = dc_field(repr=False)
    V: IntMatrix = dc_field(repr=False)

    @property
    def symbols(self) -> list[Symbol]:
        """F_q in element order, then ``Y``."""
        return list(self.field.elements()) + [Y]


def build_skeleton(field: Field) -> Skeleton:
    q = field.q
    order = 2 * q + 3
    phi: dict = {Y: 1}
    for e in field.elements():
        phi[e] = e.value + 2
    first_row: list[Symbol] = [X] * order
    for sym, k in phi.items():
        first_row[k] = sym
        first_row[order - k] = sym
    v = shift(order)
    vt = v.T
    P = {sym: v**k + vt**k for sym, k in phi.items()}
    return Skeleton(field, tuple(first_row), phi, P, v)


@dataclass(frozen=True)
class DezaFamily:
    field: Field
    skeleton: Skeleton = dc_field(repr=False)
    members: tuple[IntMatrix, ...] = dc_field(repr=False)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n(self) -> int:
        return self.q * self.q * (2 * self.q + 3)

    @property
    def phi(self) -> dict:
        return self.skeleton.phi

    def __getitem__(self, alpha: FieldElement | int) -> IntMatrix:
        idx = alpha.value if isinstance(alpha, FieldElement) else int(alpha)
        return self.members[idx]

    def __len__(self) -> int:
        return len(self.members)

    def check_invariants(self) -> None:
        k = 2 * self.q * (self.q + 1)
        total = np.zeros((self.n, self.n), dtype=np.int64)
        for alpha, nm in enumerate(self.members):
            if not (nm.is_binary() and nm.is_symmetric()):
                raise LemmaMismatch(f"N_{alpha} is not a symmetric (0,1)-matrix")
            if not np.all(nm.row_sums() == k):
                raise LemmaMismatch(f"N_{alpha} does not have constant row sum {k}")
            total += nm.array
        cliques = kron(identity(2 * self.q + 3), all_ones(self.q * self.q)).array
        if not np.array_equal(total + cliques, np.ones_like(total)):
            raise LemmaMismatch("sum of N_alpha plus I (x) J is not the all-ones matrix")


def build_family(field: Field) -> DezaFamily:
    sk = build_skeleton(field)
    members = []
    for alpha in field.elements():
        total = None
        for a in sk.symbols:
            term = kron(sk.P[a], build_C(field, a, alpha))
            total = term if total is None else total + term
        members.append(total)
    return DezaFamily(field, sk, tuple(members))


def verify_deza(adj: IntMatrix) -> DezaParams:
    """Parameters (n, k, b, a) of a Deza graph given by its adjacency matrix."""
    adj = IntMatrix(adj)
    if not adj.is_square():
        raise NotDezaError(f"adjacency matrix must be square, got {adj.shape}")
    if not adj.is_binary():
        raise NotDezaError("adjacency matrix must be a (0,1)-matrix")
    if not adj.is_symmetric():
        raise NotDezaError("adjacency matrix must be symmetric")
    if np.any(np.diag(adj.array)):
        raise NotDezaError("adjacency matrix must have zero diagonal")
    n = adj.rows
    sq = (adj @ adj).array
    degrees = set(np.diag(sq).tolist())
    if len(degrees) != 1:
        raise NotDezaError(f"graph is not regular: degrees {sorted(degrees)}")
    (k,) = degrees
    off = sq[~np.eye(n, dtype=bool)]
    values = sorted(set(off.tolist()))
    if len(values) > 2:
        raise NotDezaError(f"common-neighbour counts take {len(values)} values: {values[:6]}")
    if not values:
        values = [0]
    return DezaParams(n, int(k), int(values[-1]), int(values[0]))


def check_commutativity(family: DezaFamily) -> bool:
    ms = family.members
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            if ms[i] @ ms[j] != ms[j] @ ms[i]:
                return False
    return True


def lemma_cd_product(field: Field, a: Symbol | int, alpha, b: Symbol | int, beta) -> str:
    """Check C_{a,alpha} C_{b,beta} against its predicted form.

    Returns ``"qD"`` (a == b) or ``"J"`` (a != b); raises :class:`LemmaMismatch`.
    """
    a, b = _element(field, a), _element(field, b)
    alpha, beta = _element(field, alpha), _element(field, beta)
    if X in (a, b):
        raise ValueError("the product rule covers a, b in F_q and 'y' only")
    prod = build_C(field, a, alpha) @ build_C(field, b, beta)
    if a == b:
        expected, case = field.q * build_D(field, a, alpha - beta), "qD"
    else:
        expected, case = all_ones(field.q * field.q), "J"
    if prod != expected:
        raise LemmaMismatch(f"C[{a},{alpha}] C[{b},{beta}] does not equal {case}")
    return case


def theorem_square_M(family: DezaFamily) -> IntMatrix:
    """The matrix M with N_alpha^2 = 2q(q+1) I + 3q M + 2q (J - I - M)."""
    field, sk = family.field, family.skeleton
    total = None
    for a in sk.symbols:
        k2 = 2 * sk.phi[a]
        term = kron(sk.V**k2 + sk.V.T**k2, build_D(field, a, field.zero))
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# Verification suite
# ---------------------------------------------------------------------------


def lemma_ur_checks(p: int) -> list[Check]:
    u, r = shift(p), back_identity(p)
    item1 = item2 = True
    for a in range(p):
        ua = u**a
        if r @ ua @ r != u ** ((-a) % p):
            item1 = False
        if (ua @ r).T != ua @ r:
            item2 = False
    return [
        Check("lemma_UR.1", item1, f"R U^a R = U^-a for a in [0,{p})"),
        Check("lemma_UR.2", item2, f"U^a R symmetric for a in [0,{p})"),
    ]


def lemma_cd_checks(field: Field) -> list[Check]:
    q = field.q
    sk = build_skeleton(field)
    syms = sk.symbols
    elems = field.elements()
    checks = []

    ok = all(build_C(field, a, al).is_symmetric() and build_D(field, a, al).T == build_D(field, a, -al)
             for a in syms for al in elems)
    checks.append(Check("lemma_CD.1", ok, "C symmetric and D^T_{a,alpha} = D_{a,-alpha}"))

    ok, fail = True, ""
    for a, b in product(syms, repeat=2):
        for al, be in product(elems, repeat=2):
            try:
                lemma_cd_product(field, a, al, b, be)
            except LemmaMismatch as exc:
                ok, fail = False, str(exc)
                break
        if not ok:
            break
    checks.append(Check("lemma_CD.2", ok, fail or f"{len(syms) ** 2 * q * q} products match qD / J"))

    jq2 = all_ones(q * q)
    ok = True
    for a in syms:
        total = zeros(q * q)
        for al in elems:
            total = total + build_C(field, a, al)
        ok &= total == jq2
    checks.append(Check("lemma_CD.3", ok, "sum over alpha of C_{a,alpha} = J"))

    ok = True
    for al in elems:
        total = zeros(q * q)
        for a in syms:
            total = total + build_D(field, a, al)
        ua = _tensor_u(field, al.value, False)
        closed = q * kron(identity(q), ua) + kron(all_ones(q) - identity(q) + ua, all_ones(q))
        ok &= total == closed
    checks.append(Check("lemma_CD.4", ok, "sum over a of D_{a,alpha} matches the closed form"))

    n2 = 2 * q + 3
    total = zeros(n2)
    for a in syms:
        for b in syms:
            if a != b:
                total = total + sk.P[a] @ sk.P[b]
    ok = total == 2 * q * (all_ones(n2) - identity(n2))
    checks.append(Check("lemma_CD.5", ok, "sum_{a != b} P_a P_b = 2q (J - I)"))
    return checks


def run_suite(field: Field) -> tuple[list[Check], DezaFamily]:
    """All construction identities for ``field``; checks are sorted by name."""
    q = field.q
    checks = lemma_ur_checks(field.p) + lemma_cd_checks(field)
    fam = build_family(field)
    want = expected_params(q)

    params, bad = set(), ""
    for alpha, nm in enumerate(fam.members):
        try:
            params.add(verify_deza(nm).astuple())
        except NotDezaError as exc:
            bad = f"N_{alpha}: {exc}"
    ok = not bad and params == {want.astuple()}
    checks.append(Check("theorem_N.params", ok, bad or f"params={want.astuple()} for all {q} members"))

    m = theorem_square_M(fam)
    n = fam.n
    eye, jn = identity(n), all_ones(n)
    rhs = (2 * q * (q + 1)) * eye + (3 * q) * m + (2 * q) * (jn - eye - m)
    ok = m.is_binary() and m.is_symmetric() and not np.any(np.diag(m.array))
    ok &= all(nm @ nm == rhs for nm in fam.members)
    checks.append(Check("theorem_N.square", ok, "N^2 = 2q(q+1)I + 3qM + 2q(J-I-M), M simple graph"))

    try:
        fam.check_invariants()
        ok, detail = True, "sum N_alpha + I (x) J_{q^2} = J"
    except LemmaMismatch as exc:
        ok, detail = False, str(exc)
    arrays = [nm.array for nm in fam.members]
    disjoint = all(not np.any(arrays[i] & arrays[j]) for i in range(q) for j in range(i + 1, q))
    checks.append(Check("theorem_N.decomposition", ok and disjoint, detail + ("" if disjoint else "; members overlap")))

    comm = check_commutativity(fam)
    checks.append(Check("proposition.commutativity", comm == (field.p == 2),
                        f"commutative={str(comm).lower()} (expected {str(field.p == 2).lower()})"))

    div = all(not np.any((a @ b.T).array % q) for a in fam.members for b in fam.members)
    checks.append(Check("example.divisibility", div, f"q={q} divides every entry of N_alpha N_beta^T"))
    return sorted(checks, key=lambda c: c.name), fam
