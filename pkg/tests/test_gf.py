import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from redhom.gf import (
    FieldMismatchError,
    Matrix,
    ShapeMismatchError,
    check_modulus,
    is_prime,
    kernel,
    kernel_basis,
    mat_mul,
    rank,
    rref,
    solve_linear,
)


def brute_kernel_dim(a: np.ndarray, p: int) -> int:
    """Independent oracle: count kernel vectors by exhaustive enumeration."""
    cols = a.shape[1]
    count = 0
    for vec in itertools.product(range(p), repeat=cols):
        v = np.array(vec, dtype=np.int64)
        if not (a @ v % p).any():
            count += 1
    # kernel size is p^dim
    dim = 0
    while p**dim < count:
        dim += 1
    assert p**dim == count
    return dim


def test_is_prime():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(1)
    assert is_prime(2**31 - 1)


def test_check_modulus_rejects():
    with pytest.raises(ValueError):
        check_modulus(1)
    with pytest.raises(ValueError):
        check_modulus(6)
    with pytest.raises(ValueError):
        check_modulus(2**31)
    assert check_modulus(5) == 5


def test_kernel_identity_trivial():
    k = kernel_basis(Matrix.identity(5, 2))
    assert k.rows == 2 and k.cols == 0


def test_kernel_zero_map():
    k = kernel_basis(Matrix.zeros(5, 2, 3))
    assert k == Matrix.identity(5, 3)


def test_kernel_row_example_gf5():
    # Oracle: exhaustive enumeration gives kernel dimension 2.
    a = np.array([[1, 2, 3]], dtype=np.int64)
    assert brute_kernel_dim(a, 5) == 2
    m = Matrix(5, a)
    k = kernel_basis(m)
    assert k.tolist() == [[3, 2], [1, 0], [0, 1]]
    assert (m @ k).is_zero()
    assert k.rank() == 2


def test_solve_identity():
    b = Matrix(5, [[3], [1]])
    x = solve_linear(Matrix.identity(5, 2), b)
    assert x == b


def test_solve_underdetermined_gf5():
    a = Matrix(5, [[1, 1]])
    b = Matrix(5, [[3]])
    x = solve_linear(a, b)
    assert x.tolist() == [[3], [0]]
    assert a @ x == b


def test_solve_no_solution():
    assert solve_linear(Matrix.zeros(5, 1, 1), Matrix(5, [[1]])) is None


def test_solve_shape_contract():
    with pytest.raises(ShapeMismatchError):
        solve_linear(Matrix.zeros(5, 2, 2), Matrix.zeros(5, 3, 1))


def test_cross_modulus_rejected():
    with pytest.raises(FieldMismatchError):
        Matrix.identity(5, 2) @ Matrix.identity(7, 2)


def test_empty_shapes_behave_as_zero_maps():
    a = Matrix.zeros(5, 0, 3)
    k = kernel_basis(a)
    assert k == Matrix.identity(5, 3)
    b = Matrix.zeros(5, 3, 0)
    assert (b @ Matrix.zeros(5, 0, 2)).is_zero()
    assert kernel_basis(b).cols == 0


def test_rref_canonical_form():
    m = Matrix(5, [[2, 4, 1], [1, 2, 0]])
    red, pivots = m.rref()
    assert pivots == (0, 2)
    assert red.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_large_modulus_matmul_no_overflow():
    p = 2147483629  # largest prime below 2^31
    a = np.full((2, 40), p - 1, dtype=np.int64)
    b = np.full((40, 2), p - 1, dtype=np.int64)
    got = mat_mul(a, b, p)
    expect = (40 * (p - 1) * (p - 1)) % p
    assert (got == expect).all()


small_prime = st.sampled_from([2, 3, 5, 7])


@st.composite
def random_matrix(draw, max_dim=5):
    p = draw(small_prime)
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    entries = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c),
                            min_size=r, max_size=r))
    return Matrix(p, np.array(entries, dtype=np.int64).reshape(r, c))


@settings(max_examples=60, deadline=None)
@given(random_matrix())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert m.rank() + k.cols == m.cols
    if k.cols:
        assert (m @ k).is_zero()
        assert k.rank() == k.cols


@settings(max_examples=60, deadline=None)
@given(random_matrix(), st.integers(0, 3), st.data())
def test_solve_roundtrip(m, c, data):
    x0 = Matrix(m.p, np.array(
        data.draw(st.lists(st.lists(st.integers(0, m.p - 1), min_size=c, max_size=c),
                           min_size=m.cols, max_size=m.cols)),
        dtype=np.int64).reshape(m.cols, c))
    b = m @ x0
    x = solve_linear(m, b)
    assert x is not None
    assert m @ x == b


@settings(max_examples=40, deadline=None)
@given(random_matrix())
def test_determinism(m):
    r1 = rref(m.a, m.p)
    r2 = rref(m.a.copy(), m.p)
    assert (r1[0] == r2[0]).all() and r1[1] == r2[1]
    assert rank(m.a, m.p) == rank(m.a.copy(), m.p)
    k1, f1 = kernel(m.a, m.p)
    k2, f2 = kernel(m.a, m.p)
    assert (k1 == k2).all() and f1 == f2
