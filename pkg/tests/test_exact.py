from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from parorbit.exact import (QQ, GF, ExactMatrix, FieldTag, Subspace, SizeMismatch, NotNilpotent, DimensionTooLarge,
                            kernel, jordan_matrix, jordan_type, nilpotent_jordan_basis, conjugate_partition,
                            generic_charpoly, is_nilpotent_subspace, hstack, vstack, block_diag)
from helpers import naive_rank, naive_matmul, naive_det

small = st.integers(-4, 4)


def mats(r, c):
    return st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)


def test_field_parse_and_scalars():
    assert FieldTag.parse("Q") is QQ
    F = FieldTag.parse("GF(7)")
    assert F == GF(7) and F(-1) == 6 and F(Fraction(1, 3)) == 5
    assert QQ.scalar_to_json(Fraction(-2, 4)) == "-1/2"
    assert QQ.scalar_from_json("3/5") == Fraction(3, 5)
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_json_round_trip():
    m = ExactMatrix.from_rows(QQ, [[Fraction(1, 2), 0], [3, -1]])
    assert ExactMatrix.from_json(m.to_json()) == m
    g = ExactMatrix.from_rows(GF(5), [[7, 1]])
    assert g.to_json()["entries"] == [[2, 1]]


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        ExactMatrix.from_rows(QQ, [[1, 2], [3]])
    with pytest.raises(SizeMismatch):
        ExactMatrix.identity(QQ, 2) @ ExactMatrix.identity(QQ, 3)


@settings(max_examples=60, deadline=None)
@given(mats(3, 4), mats(4, 2))
def test_product_and_rank_against_naive(a, b):
    A = ExactMatrix.from_rows(QQ, a)
    B = ExactMatrix.from_rows(QQ, b)
    assert (A @ B).to_rows() == naive_matmul(a, b)
    assert A.rank() == naive_rank(a)
    for q in (2, 5):
        assert ExactMatrix.from_rows(GF(q), a).rank() == naive_rank(a, q)


@settings(max_examples=60, deadline=None)
@given(mats(3, 3))
def test_det_inverse_solve(a):
    A = ExactMatrix.from_rows(QQ, a)
    assert A.det() == naive_det(a)
    if A.det() != 0:
        assert A @ A.inverse() == ExactMatrix.identity(QQ, 3)
        b = ExactMatrix.from_rows(QQ, [[1], [2], [3]])
        assert A @ A.solve_right(b) == b
    G = ExactMatrix.from_rows(GF(3), a)
    assert G.det() == naive_det(a, 3)


@settings(max_examples=40, deadline=None)
@given(mats(3, 5))
def test_kernel_dimension(a):
    A = ExactMatrix.from_rows(QQ, a)
    K = kernel(A)
    assert K.dim == 5 - naive_rank(a)
    for v in K.basis:
        assert not any(A.apply(v))


def test_subspace_operations():
    U = Subspace(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    W = Subspace(QQ, 3, [[0, 1, 0], [0, 0, 1]])
    assert (U + W).dim == 3
    assert U.intersect(W) == Subspace(QQ, 3, [[0, 1, 0]])
    assert U.contains([2, 5, 0]) and not U.contains([0, 0, 1])
    assert U.complement_units() == [2]


def test_stacking():
    I = ExactMatrix.identity(QQ, 2)
    assert hstack([I, I]).shape == (2, 4)
    assert vstack([I, I]).shape == (4, 2)
    assert block_diag([I, ExactMatrix.identity(QQ, 1)]) == ExactMatrix.identity(QQ, 3)


@pytest.mark.parametrize("lam", [[1], [3, 1], [2, 2, 1], [4, 2, 1], [3, 3]])
@pytest.mark.parametrize("F", [QQ, GF(2), GF(5)])
def test_jordan_basis(lam, F):
    J = jordan_matrix(F, lam)
    # disguise with a unipotent change of basis
    n = sum(lam)
    g = ExactMatrix.from_rows(F, [[1 if i == j else (i + 2 * j) % 3 if j > i else 0 for j in range(n)]
                                  for i in range(n)])
    m = g @ J @ g.inverse()
    B, part = nilpotent_jordan_basis(m)
    assert sorted(part, reverse=True) == part == sorted(lam, reverse=True)
    assert B.inverse() @ m @ B == jordan_matrix(F, part)
    assert jordan_type(m) == sorted(lam, reverse=True)


def test_not_nilpotent():
    with pytest.raises(NotNilpotent):
        nilpotent_jordan_basis(ExactMatrix.identity(QQ, 2))
    with pytest.raises(NotNilpotent):
        jordan_type(ExactMatrix.identity(QQ, 2))


def test_conjugate_partition():
    assert conjugate_partition([4, 2, 1]) == [3, 2, 1, 1]
    assert conjugate_partition(conjugate_partition([5, 3, 3])) == [5, 3, 3]


def test_generic_charpoly_and_nilpotent_subspace():
    E12 = ExactMatrix.unit(QQ, 2, 2, 0, 1)
    E21 = ExactMatrix.unit(QQ, 2, 2, 1, 0)
    assert is_nilpotent_subspace([E12])
    # E12 + E21 has eigenvalues ±1
    assert not is_nilpotent_subspace([E12, E21])
    # strictly upper triangular 3x3 matrices
    ups = [ExactMatrix.unit(QQ, 3, 3, i, j) for i in range(3) for j in range(i + 1, 3)]
    assert is_nilpotent_subspace(ups)
    c = generic_charpoly([ExactMatrix.identity(GF(3), 2)])
    assert len(c) == 3
    with pytest.raises(DimensionTooLarge):
        full = [ExactMatrix.unit(QQ, 5, 5, i, j) for i in range(5) for j in range(5)]
        generic_charpoly(full, budget=50)
