from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from tc_lab.exact_linalg import (
    IntMatrix, smith_normal_form, invariant_factors, homology_at, membership,
    kernel_basis, unit_pivot_reduce, local_torsion_invariants, PresentedAbelianGroup,
    AbHom, CompositionNotZero, NotWellDefined, hermite_rows,
)


def small_matrices(max_dim=6, lo=-5, hi=5):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def oracle_invariants(rows):
    """Nonzero diagonal of sympy's Smith form, made positive."""
    D = sympy_snf(Matrix(rows), domain=ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)


def det(rows):
    return int(Matrix(rows).det())


def test_snf_examples():
    U, D, V = smith_normal_form(IntMatrix.identity(2))
    assert D == IntMatrix.identity(2)
    _, D, _ = smith_normal_form(IntMatrix.from_dense([[0]]))
    assert D.to_dense() == [[0]]
    M = IntMatrix.from_dense([[2, 4], [6, 8]])
    U, D, V = smith_normal_form(M)
    assert D.to_dense() == [[2, 0], [0, 4]]
    assert U @ M @ V == D


@settings(max_examples=80, deadline=None)
@given(small_matrices())
def test_snf_matches_oracle_and_is_unimodular(rows):
    M = IntMatrix.from_dense(rows)
    snf = smith_normal_form(M)
    U, D, V = snf
    assert U @ M @ V == D
    assert abs(det(U.to_dense())) == 1 and abs(det(V.to_dense())) == 1
    d = snf.diagonal
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    # the diagonal is unique up to sign, so compare as a multiset
    assert sorted(d) == oracle_invariants(rows)
    assert sorted(invariant_factors(M)) == oracle_invariants(rows)


@settings(max_examples=60, deadline=None)
@given(small_matrices(max_dim=7, lo=-2, hi=2))
def test_unit_pivot_reduce_keeps_cokernel(rows):
    M = IntMatrix.from_dense(rows)
    count, R = unit_pivot_reduce(M)
    rest = list(smith_normal_form(R, want_transforms=False).diagonal)
    assert sorted([1] * count + rest) == oracle_invariants(rows)


def test_homology_examples():
    z = IntMatrix.zeros(1, 1)
    two = IntMatrix.from_dense([[2]])
    assert homology_at(z, z)[0].invariants == [0]
    assert homology_at(two, z)[0].invariants == [2]
    assert homology_at(z, two)[0].invariants == []
    with pytest.raises(CompositionNotZero):
        homology_at(two, two)


def _rational_rank(rows):
    A = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c] / A[rank][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


@settings(max_examples=40, deadline=None)
@given(small_matrices(max_dim=12, lo=-5, hi=5))
def test_homology_against_naive_oracle(rows):
    # d_in = B, d_out = C with C B = 0: take C to be a cokernel-side row
    # operator killing the column span of B
    B = IntMatrix.from_dense(rows)
    n = B.nrows
    K = kernel_basis(B.T)          # columns y with y^T B = 0
    C = K.T if K.ncols else IntMatrix.zeros(0, n)
    grp, _ = homology_at(B, C)
    free = (n - _rational_rank(C.to_dense() if C.nrows else [])) - _rational_rank(rows)
    assert grp.free_rank() == free
    # torsion of ker C / im B equals torsion of coker B since ker C is the
    # saturation of im B here
    tors = [d for d in oracle_invariants(rows) if d > 1]
    assert sorted(d for d in grp.invariants if d) == tors


@settings(max_examples=40, deadline=None)
@given(small_matrices(), st.data())
def test_membership_of_image(rows, data):
    M = IntMatrix.from_dense(rows)
    x = data.draw(st.lists(st.integers(-4, 4), min_size=M.ncols, max_size=M.ncols))
    v = M.apply(x)
    sol = membership(M, v)
    assert sol is not None and M.apply(sol) == v


def test_membership_examples():
    assert membership(IntMatrix.identity(3), [4, -1, 2]) == [4, -1, 2]
    assert membership(IntMatrix.from_dense([[2]]), [3]) is None
    assert membership(IntMatrix.from_dense([[2, 4], [6, 8]]), [2, 6]) == [1, 0]


def test_sparse_invariants():
    M = IntMatrix.from_dense([[0, 2, 0], [1, 0, 0], [0, 0, 0]])
    assert not any(v == 0 for _, _, v in M.triples)
    assert list(M.triples) == sorted(M.triples)


def test_local_torsion_matches_snf():
    M = IntMatrix.from_dense([[2, 0, 0], [0, 6, 0], [0, 0, 0], [1, 3, 0]])
    assert local_torsion_invariants(M, {2: 2, 3: 1}) == [6]
    assert [d for d in oracle_invariants(M.to_dense()) if d > 1] == [6]


@settings(max_examples=40, deadline=None)
@given(small_matrices(max_dim=6, lo=-4, hi=4))
def test_local_torsion_property(rows):
    M = IntMatrix.from_dense(rows)
    tors = [d for d in oracle_invariants(rows) if d > 1]
    bound = {}
    for d in tors:
        for p in (2, 3, 5, 7, 11, 13):
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                bound[p] = max(bound.get(p, 0), e)
        if d > 1:
            return  # prime outside the table; nothing to compare
    assert local_torsion_invariants(M, bound) == tors


def test_presented_group_and_homs():
    G = PresentedAbelianGroup.from_invariants([2, 0])
    assert G.free_rank() == 1
    Z2 = PresentedAbelianGroup.from_invariants([2])
    Z4 = PresentedAbelianGroup.from_invariants([4])
    AbHom(Z2, Z4, IntMatrix.from_dense([[2]]))
    with pytest.raises(NotWellDefined):
        AbHom(Z2, Z4, IntMatrix.from_dense([[1]]))
    assert len(list(PresentedAbelianGroup.from_invariants([2, 3]).elements())) == 6


def test_hermite_rows_canonical():
    a = hermite_rows([[2, 4], [0, 3]], 2)
    b = hermite_rows([[2, 7], [0, 3]], 2)
    assert a == b
