from __future__ import annotations

import itertools
import warnings

import numpy as np
import pytest

from dezacodes.codes import (
    EmptySpanError,
    PrecheckError,
    SpanConfig,
    SpanTooLargeError,
    SubspaceCode,
    build_lcd_code,
    build_so_code,
    closest_pair,
    dual,
    injection_distance,
    intersection_dim,
    is_lcd,
    is_self_orthogonal,
    meets_dual_trivially,
    min_distance,
    projective_count,
    subspace_distance,
)
from dezacodes.exactmat import FqMatrix, IntMatrix, ShapeError, Subspace, identity, row_space
from dezacodes.gf import make_field
from oracles import all_subspaces_gf2, distinct_row_spaces_mod_p, gf2_rank, rank_mod_p

F2, F3 = make_field(2), make_field(3)


def sub(field, rows, n=None):
    a = np.array(rows, dtype=np.uint8).reshape(-1, n if n is not None else len(rows[0]))
    return row_space(FqMatrix(field, a))


def gf2_subspace(vectors: frozenset[int], n: int) -> Subspace:
    rows = [[(v >> (n - 1 - i)) & 1 for i in range(n)] for v in sorted(vectors) if v]
    return sub(F2, rows, n) if rows else Subspace.zero(F2, n)


def all_subspaces_f3_2() -> list[Subspace]:
    lines = [sub(F3, [[1, c]]) for c in range(3)] + [sub(F3, [[0, 1]])]
    return [Subspace.zero(F3, 2), *lines, Subspace.full(F3, 2)]


def test_distance_examples():
    u = sub(F2, [[1, 0]])
    assert subspace_distance(u, u) == 0 and injection_distance(u, u) == 0
    assert subspace_distance(sub(F2, [[1, 0]]), sub(F2, [[1, 1]])) == 2
    line, plane = sub(F2, [[1, 0, 0]]), sub(F2, [[1, 0, 0], [0, 1, 0]])
    assert subspace_distance(line, plane) == 1
    far = sub(F2, [[0, 1, 0], [0, 0, 1]])
    assert intersection_dim(line, far) == 0
    assert injection_distance(line, far) == 2
    with pytest.raises(ShapeError):
        subspace_distance(line, sub(F2, [[1, 0]]))
    with pytest.raises(ShapeError):
        subspace_distance(sub(F3, [[1, 0]]), sub(F2, [[1, 0]]))


def test_all_lines_of_f2_squared():
    lines = [gf2_subspace(s, 2) for s in all_subspaces_gf2(2) if len(s) == 2]
    assert len(lines) == 3
    assert min_distance(SubspaceCode.from_subspaces(lines)) == 2


def test_complementary_planes_in_f2_4():
    code = SubspaceCode.from_subspaces([sub(F2, [[1, 0, 0, 0], [0, 1, 0, 0]]), sub(F2, [[0, 0, 1, 0], [0, 0, 0, 1]])])
    assert min_distance(code) == 4
    assert closest_pair(code) == (4, 0, 1)


def test_min_distance_needs_two_members():
    with pytest.raises(ValueError):
        min_distance(SubspaceCode.from_subspaces([sub(F2, [[1, 0]])]))


def test_injection_is_half_subspace_distance_for_equal_dims():
    rng = np.random.default_rng(5)
    for _ in range(60):
        k = int(rng.integers(1, 5))
        a = rng.integers(0, 2, (k, 6)).astype(np.uint8)
        b = rng.integers(0, 2, (k, 6)).astype(np.uint8)
        u, w = row_space(FqMatrix(F2, a)), row_space(FqMatrix(F2, b))
        if u.dim != w.dim:
            continue
        ds = 2 * gf2_rank(np.vstack([a, b])) - gf2_rank(a) - gf2_rank(b)
        assert subspace_distance(u, w) == ds
        assert 2 * injection_distance(u, w) == ds


def test_metric_axioms_exhaustive_f2_3_and_f3_2():
    spaces2 = [gf2_subspace(s, 3) for s in all_subspaces_gf2(3)]
    assert len(spaces2) == 16
    for spaces in (spaces2, all_subspaces_f3_2()):
        d = np.array([[subspace_distance(u, w) for w in spaces] for u in spaces])
        assert np.array_equal(d, d.T)
        assert np.all((d == 0) == np.eye(len(spaces), dtype=bool))
        assert np.all(d[:, :, None] <= d[:, None, :] + d.T[None, :, :])


def test_dual_examples():
    assert dual(Subspace.full(F3, 3)) == Subspace.zero(F3, 3)
    assert dual(Subspace.zero(F3, 3)) == Subspace.full(F3, 3)
    assert dual(sub(F3, [[1, 1]])) == sub(F3, [[1, 2]])


def test_dual_dimension_exhaustive_f2_4():
    spaces = all_subspaces_gf2(4)
    assert len(spaces) == 67
    for s in spaces:
        u = gf2_subspace(s, 4)
        d = dual(u)
        assert u.dim + d.dim == 4
        assert not (u.basis.array.astype(int) @ d.basis.array.T.astype(int) % 2).any()
        assert dual(d) == u


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (5, 1)])
def test_dual_over_other_fields(p, m):
    f = make_field(p, m)
    rng = np.random.default_rng(p)
    for _ in range(10):
        u = row_space(FqMatrix(f, rng.integers(0, f.q, (3, 7)).astype(np.uint8)))
        d = dual(u)
        assert u.dim + d.dim == 7
        assert (u.basis @ d.basis.T).is_zero()


def test_so_code_q2(families):
    fam = families(2)
    code = build_so_code(list(fam.members), F2)
    assert 1 <= len(code) <= 3
    assert is_self_orthogonal(code)
    for u, w in itertools.product(code.members, repeat=2):
        assert not (u.basis.array.astype(int) @ w.basis.array.T.astype(int) % 2).any()
    # independent count: row spaces of N0, N1, N0 + N1 mod 2
    raw = [fam[0].array, fam[1].array, fam[0].array + fam[1].array]
    assert len(code) == len(distinct_row_spaces_mod_p(raw, 2)) == 2
    assert sorted(code.dimensions) == sorted(rank_mod_p(raw[i], 2) for i in distinct_row_spaces_mod_p(raw, 2))


def test_so_code_q2_min_distance_bruteforce(families):
    fam = families(2)
    code = build_so_code(list(fam.members), F2)
    raw = [fam[0].array, fam[1].array, fam[0].array + fam[1].array]
    keep = [raw[i] % 2 for i in distinct_row_spaces_mod_p(raw, 2)]
    best = min(2 * gf2_rank(np.vstack([a, b])) - gf2_rank(a) - gf2_rank(b) for a, b in itertools.combinations(keep, 2))
    assert min_distance(code) == best == 6


def test_so_code_q3_matches_independent_count(families):
    fam = families(3)
    code = build_so_code(list(fam.members), F3)
    assert is_self_orthogonal(code)
    raw = []
    for c in itertools.product(range(3), repeat=3):
        if any(c) and c[next(i for i, x in enumerate(c) if x)] == 1:
            raw.append(sum(ci * m.array for ci, m in zip(c, fam.members)))
    assert len(raw) == projective_count(3, 3) == 13
    assert len(code) == len(distinct_row_spaces_mod_p(raw, 3)) == 7


def test_projective_enumeration_loses_nothing():
    # every nonzero coefficient vector gives a row space already produced by a representative
    rng = np.random.default_rng(2)
    mats = [IntMatrix(3 * rng.integers(0, 2, (4, 4)) + np.diag([1, 0, 0, 0])) for _ in range(2)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # some random combinations vanish mod 3
        code = build_so_code(mats, F3, SpanConfig(precheck=False))
    full = set()
    for c in itertools.product(range(3), repeat=2):
        x = sum(ci * m.array for ci, m in zip(c, mats)) % 3
        if x.any():
            full.add(row_space(FqMatrix(F3, x)))
    assert full == set(code.members)


def test_so_code_degenerate_and_precheck():
    with pytest.raises(EmptySpanError):
        build_so_code([2 * identity(2)], F2)
    with pytest.raises(PrecheckError) as err:
        build_so_code([IntMatrix([[0, 1], [0, 0]])], F2)
    assert err.value.witness == (0, 0, 0, 0, 1)
    with pytest.raises(ValueError):
        build_so_code([], F2)
    with pytest.raises(ShapeError):
        build_so_code([identity(2), identity(3)], F2, SpanConfig(precheck=False))


def test_zero_reductions_are_skipped_with_warning(families):
    n0 = families(2)[0]
    with pytest.warns(UserWarning, match="skipped 1"):
        code = build_so_code([n0, 2 * n0], F2)
    assert code.skipped_zero == 1 and len(code) == 1


def test_cap_and_sampling(families):
    fam = list(families(3).members)
    with pytest.raises(SpanTooLargeError):
        build_so_code(fam, F3, SpanConfig(cap=5))
    a = build_so_code(fam, F3, SpanConfig(sample=6, seed=4))
    b = build_so_code(fam, F3, SpanConfig(sample=6, seed=4))
    assert a.members == b.members and not a.exhaustive
    assert set(a.members) <= set(build_so_code(fam, F3).members)


def test_lcd_code_q3(families):
    fam = families(3)
    code = build_lcd_code(list(fam.members), F3)
    assert len(code) == 2 * 13
    assert all(d == fam.n for d in code.dimensions)
    assert is_lcd(code)
    # stacked-dual route on a sample of ordered pairs
    rng = np.random.default_rng(0)
    for i, j in rng.integers(0, len(code), (25, 2)):
        assert meets_dual_trivially(code.members[i], code.members[j])


def test_lcd_code_q2_size(families):
    fam = families(2)
    code = build_lcd_code(list(fam.members), F2)
    assert len(code) == projective_count(2, 2) == 3
    assert is_lcd(code)
    for u, w in itertools.product(code.members, repeat=2):
        g = u.basis.array.astype(int) @ w.basis.array.T.astype(int)
        assert gf2_rank(g) == fam.n


def test_full_space_code():
    code = SubspaceCode.from_subspaces([Subspace.full(F3, 4)])
    assert not is_self_orthogonal(code)
    assert is_lcd(code)


def test_is_lcd_agrees_with_stacked_dual_route():
    rng = np.random.default_rng(9)
    for f in (F2, F3, make_field(2, 2)):
        members = [row_space(FqMatrix(f, rng.integers(0, f.q, (int(rng.integers(1, 4)), 5)).astype(np.uint8))) for _ in range(6)]
        code = SubspaceCode.from_subspaces(members)
        want = all(meets_dual_trivially(u, w) for u, w in itertools.product(code.members, repeat=2))
        assert bool(is_lcd(code)) == want
        for u in code.members:
            single = SubspaceCode.from_subspaces([u])
            assert bool(is_lcd(single)) == meets_dual_trivially(u, u)


def test_non_so_witness():
    code = SubspaceCode.from_subspaces([sub(F2, [[1, 1, 0, 0]]), sub(F2, [[1, 0, 0, 0]])])
    v = is_self_orthogonal(code)
    assert not v and v.witness == (0, 1)


def test_code_rejects_duplicates_and_mixed_spaces():
    u = sub(F2, [[1, 0]])
    with pytest.raises(ValueError):
        SubspaceCode(F2, 2, (u, u))
    with pytest.raises(ShapeError):
        SubspaceCode(F2, 3, (u,))
    assert len(SubspaceCode.from_subspaces([u, u])) == 1
