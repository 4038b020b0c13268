import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from fanovol.lattice import (
    LatticeError,
    Sublattice,
    det,
    elementary_divisors,
    hermite_normal_form,
    is_primitive,
    is_saturated,
    lattice_index,
    matmul,
    matrix_from_json,
    matrix_to_json,
    nullspace,
    quotient_projection,
    saturate,
    smith_normal_form,
)

small_ints = st.integers(-9, 9)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def is_hnf(H):
    last = -1
    for row in H:
        nz = [j for j, v in enumerate(row) if v]
        if not nz:
            last = len(row)
            continue
        p = nz[0]
        assert p > last and row[p] > 0
        last = p
    for r, row in enumerate(H):
        nz = [j for j, v in enumerate(row) if v]
        if nz:
            p = nz[0]
            for above in H[:r]:
                assert 0 <= above[p] < row[p]
    return True


def test_hnf_examples():
    I = [[1, 0], [0, 1]]
    assert hermite_normal_form(I) == (I, I)
    assert hermite_normal_form([[2, 0], [0, 3]])[0] == [[2, 0], [0, 3]]
    H, U = hermite_normal_form([[2, 4], [1, 3]])
    assert abs(det(H)) == 2 and is_hnf(H)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_hnf_properties(A):
    H, U = hermite_normal_form(A)
    assert matmul(U, A) == H
    assert abs(det(U)) == 1
    assert is_hnf(H)


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]])[0] == [[1, 0], [0, 6]]
    assert smith_normal_form([[0, 0], [0, 0]])[0] == [[0, 0], [0, 0]]
    assert smith_normal_form([[1, 0], [0, 1]])[0] == [[1, 0], [0, 1]]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_snf_properties_against_sympy(A):
    S, U, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == S
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    assert all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    ref = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    ref_diag = [abs(int(ref[i, i])) for i in range(min(ref.shape))]
    assert sorted(diag) == sorted(ref_diag)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_det_against_sympy(A):
    assert det(A) == int(sympy.Matrix(A).det())


def test_saturate_examples():
    assert saturate(Sublattice.from_generators([[2, 0]], 2)) == Sublattice.from_generators([[1, 0]], 2)
    assert saturate(Sublattice.from_generators([[1, 1], [1, -1]], 2)) == Sublattice.full(2)
    L = Sublattice.from_generators([[1, 2, 3], [0, 1, 1]], 3)
    assert saturate(L) == L


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: matrices(r, 4)))
def test_saturate_index_is_product_of_elementary_divisors(A):
    L = Sublattice.from_generators(A, 4)
    if L.rank == 0:
        return
    S = saturate(L)
    assert saturate(S) == S and is_saturated(S)
    prod = 1
    for e in elementary_divisors(L.rows()):
        prod *= e
    assert lattice_index(S, L) == prod
    assert all(S.contains(v) for v in L.rows())


def test_quotient_projection_examples():
    q = quotient_projection(Sublattice(3, ()))
    assert q.matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    q = quotient_projection(Sublattice.from_generators([[1, 1]], 2))
    assert q.rank == 1 and q((1, 1)) == (0,) and abs(q((1, 0))[0]) == 1
    K = saturate(Sublattice.from_generators([[1, 1, 2]], 3))
    q = quotient_projection(K)
    e0, e1, e2 = q.image_of_basis()
    assert q.rank == 2
    assert all(a + b + 2 * c == 0 for a, b, c in zip(e0, e1, e2))


def test_quotient_projection_requires_saturation():
    with pytest.raises(LatticeError):
        quotient_projection(Sublattice.from_generators([[2, 0]], 2))


def test_quotient_kernel_is_exact():
    rng = random.Random(7)
    for _ in range(15):
        gens = [[rng.randint(-4, 4) for _ in range(5)] for _ in range(rng.randint(1, 3))]
        K = saturate(Sublattice.from_generators(gens, 5))
        q = quotient_projection(K)
        assert q.rank == 5 - K.rank
        for _ in range(30):
            x = [rng.randint(-3, 3) for _ in range(5)]
            assert (q(x) == (0,) * q.rank) == K.contains(x)
        for row in K.rows():
            assert q(row) == (0,) * q.rank
        # surjective: the images of the basis generate Z^rank
        if q.rank:
            assert elementary_divisors([list(v) for v in q.image_of_basis()]) == [1] * q.rank


def test_lattice_index_examples():
    Z2 = Sublattice.full(2)
    assert lattice_index(Z2, Sublattice.from_generators([[2, 0], [0, 2]], 2)) == 4
    assert lattice_index(Z2, Sublattice.from_generators([[1, 1], [1, -1]], 2)) == 2
    assert lattice_index(Z2, Z2) == 1
    with pytest.raises(LatticeError):
        lattice_index(Z2, Sublattice.from_generators([[1, 0]], 2))


def test_is_primitive():
    assert not is_primitive((2, 4, 6))
    assert is_primitive((3, 5))
    assert is_primitive((0, 0, 1))
    with pytest.raises(LatticeError):
        is_primitive((0, 0))


def test_nullspace():
    A = [[1, 1, 2]]
    basis = nullspace(A)
    assert len(basis) == 2
    assert all(sum(a * x for a, x in zip(A[0], v)) == 0 for v in basis)


def test_matrix_json_round_trip():
    A = [[1, -2], [10**30, 0]]
    assert matrix_from_json(matrix_to_json(A)) == A
