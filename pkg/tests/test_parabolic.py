from itertools import product

import pytest
from hypothesis import given, strategies as st

from parorbit.exact import QQ, GF, ExactMatrix
from parorbit.parabolic import (BlockVector, as_bv, shape_of, contains, in_nilpotent_cone, leq_c, leq_c_embedding,
                                compositions, coarsenings, refinements, merge_pattern, transpose_shape,
                                transpose_element)

bvs = st.lists(st.integers(1, 4), min_size=1, max_size=4).map(tuple)


def naive_leq_c(a, b):
    # try every increasing embedding
    from itertools import combinations
    return any(all(x <= b[i] for x, i in zip(a, idx)) for idx in combinations(range(len(b)), len(a)))


def test_parse_and_validation():
    assert BlockVector.parse("(2, 1,3)").blocks == (2, 1, 3)
    assert as_bv([1, 1]) == as_bv("1,1")
    for bad in ("", "0,1", "2,-1"):
        with pytest.raises(ValueError):
            BlockVector.parse(bad)


def test_shape_dimensions():
    s = shape_of((2, 1))
    assert s.n == 3 and s.dim_p() == 4 + 1 + 2 and s.dim_nilradical() == 2
    assert s.positions("levi") == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]
    assert list(s.block_range(1)) == [2]


def test_membership():
    s = shape_of((1, 2))
    up = ExactMatrix.from_rows(QQ, [[0, 1, 1], [0, 0, 1], [0, 1, 0]])
    assert contains(s, up) and not contains(s, up, "nilradical")
    assert not in_nilpotent_cone(s, up)
    low = ExactMatrix.from_rows(QQ, [[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    assert not contains(s, low)
    n = ExactMatrix.from_rows(GF(2), [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert in_nilpotent_cone(s, n) and not in_nilpotent_cone(s, n, x=2)


def test_compositions_count():
    for n in range(1, 9):
        cs = compositions(n)
        assert len(cs) == 2 ** (n - 1) == len(set(cs))


@given(bvs, bvs)
def test_leq_c_matches_exhaustive(a, b):
    assert leq_c(a, b) == naive_leq_c(a, b)
    emb = leq_c_embedding(a, b)
    assert (emb is not None) == leq_c(a, b)
    if emb:
        assert all(x <= b[i] for x, i in zip(a, emb)) and emb == sorted(set(emb))


@given(bvs, st.integers(0, 4), st.integers(1, 3))
def test_leq_c_insert_and_enlarge(a, pos, extra):
    pos = min(pos, len(a))
    assert leq_c(a, a[:pos] + (extra,) + a[pos:])
    bigger = tuple(x + (extra if i == pos % len(a) else 0) for i, x in enumerate(a))
    assert leq_c(a, bigger)


def test_leq_c_preorder_small():
    vs = [c.blocks for n in range(1, 6) for c in compositions(n)]
    for a in vs:
        assert leq_c(a, a)
    for a, b, c in product(vs[:20], repeat=3):
        if leq_c(a, b) and leq_c(b, c):
            assert leq_c(a, c)


def test_coarsen_refine_inverse():
    b = (1, 2, 1)
    cs = coarsenings(b)
    assert len(cs) == 4 and BlockVector((4,)) in cs
    for c in cs:
        assert merge_pattern(b, c) is not None
    for r in refinements(b):
        assert merge_pattern(r, b) is not None
    assert merge_pattern((2, 2), (1, 3)) is None


def test_transpose():
    s = shape_of((1, 2))
    assert transpose_shape((1, 2)) == BlockVector((2, 1))
    m = ExactMatrix.from_rows(QQ, [[0, 1, 2], [0, 0, 3], [0, 0, 0]])
    t = transpose_element(s, m)
    assert contains(shape_of((2, 1)), t)
    assert transpose_element(shape_of((2, 1)), t) == m
