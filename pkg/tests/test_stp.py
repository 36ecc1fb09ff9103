from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pbnpin.stp import (DimensionError, LogicalMatrix, Matrix, StochasticMatrix, as_fraction, delta,
                        identity, khatri_rao, kron, power_reducing_matrix, stp, stp_chain, swap_matrix)

small = st.integers(-3, 3).map(Fraction)


def matrices(max_rows=4, max_cols=4):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    ).map(Matrix)


def unit_vectors(n):
    return [delta(n, i) for i in range(1, n + 1)]


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("0.005") == Fraction(1, 200)


def test_stp_identity_and_negation():
    assert stp(identity(2), identity(2)) == identity(2).to_matrix()
    neg = LogicalMatrix(2, (2, 1))
    assert stp(neg, delta(2, 1)) == delta(2, 2)


def test_stp_against_kronecker_expansion():
    a = Matrix([[1, 2], [3, 4]])
    b = Matrix([[1], [2], [3], [5]])
    expected = np.kron(np.array([[1, 2], [3, 4]]), np.eye(2, dtype=int)) @ np.array([1, 2, 3, 5])
    assert [int(v) for v in stp(a, b).data[:, 0]] == list(expected)


def test_stp_equals_ordinary_product_when_dimensions_match():
    a = Matrix([[1, 2, 0], [0, 1, 1]])
    b = Matrix([[1, 0], [2, 1], [0, 3]])
    assert stp(a, b) == a @ b


def test_kron_index_formula():
    rng = np.random.default_rng(3)
    a = Matrix(rng.integers(-4, 5, size=(3, 2)).tolist())
    b = Matrix(rng.integers(-4, 5, size=(2, 3)).tolist())
    k = kron(a, b)
    assert k.shape == (6, 6)
    for i1, j1, i2, j2 in product(range(3), range(2), range(2), range(3)):
        assert k.data[i1 * 2 + i2, j1 * 3 + j2] == a.data[i1, j1] * b.data[i2, j2]
    assert kron(identity(2), identity(2)) == identity(4).to_matrix()
    assert kron(delta(2, 1), delta(2, 2)) == delta(4, 2)


@settings(max_examples=60, deadline=None)
@given(matrices(), matrices(), matrices())
def test_stp_associative(a, b, c):
    assert stp(stp(a, b), c) == stp(a, stp(b, c))


@settings(max_examples=60, deadline=None)
@given(matrices(max_cols=1), matrices())
def test_vector_pull_through(a, b):
    # column vector a (p x 1) commutes past b at the cost of I_p (x) b
    p = a.rows
    assert stp(a, b) == stp(kron(identity(p), b), a)


def test_swap_matrix_exhaustive():
    for p, d in product(range(1, 9), repeat=2):
        w = swap_matrix(p, d)
        for a in unit_vectors(p):
            for b in unit_vectors(d):
                # a (x) b is a unit vector, so W applied to it is a column lookup
                ab = stp(a, b).to_logical()
                assert w.compose(ab).to_matrix() == stp(b, a)
    assert swap_matrix(1, 5) == identity(5)


def test_swap_matrix_dense_product():
    for p, d in [(2, 2), (4, 2), (3, 5)]:
        w = swap_matrix(p, d)
        for a in unit_vectors(p):
            for b in unit_vectors(d):
                assert stp_chain([w, a, b]) == stp(b, a)


def test_swap_block_layout():
    w = swap_matrix(3, 2).to_matrix()
    blocks = [kron(identity(2), delta(3, i)) for i in range(1, 4)]
    assert w == Matrix(np.hstack([blk.data for blk in blocks]))


def test_power_reducing_defining_property():
    assert power_reducing_matrix(1) == LogicalMatrix(4, (1, 4))
    for n in range(1, 7):
        phi = power_reducing_matrix(n)
        size = 2 ** n
        for j in range(1, size + 1):
            # Phi x for x = delta^j is column j; x (x) x has its 1 at (j-1)*size + j
            assert phi.cols[j - 1] == (j - 1) * size + j
        if n <= 3:
            for x in unit_vectors(size):
                assert phi.to_matrix() @ x == kron(x, x)


def _product_formula(n):
    m_r = LogicalMatrix(4, (1, 4))
    factors = [kron(identity(2 ** (i - 1)), stp(kron(identity(2), swap_matrix(2, 2 ** (n - i))), m_r))
               for i in range(1, n + 1)]
    return stp_chain(factors)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_power_reducing_product_formula(n):
    assert _product_formula(n) == power_reducing_matrix(n).to_matrix()


def test_khatri_rao_examples():
    assert khatri_rao(identity(2), identity(2)) == LogicalMatrix(4, (1, 4))
    assert khatri_rao(LogicalMatrix(2, (1, 2)), LogicalMatrix(2, (2, 1))) == LogicalMatrix(4, (2, 3))
    with pytest.raises(DimensionError):
        khatri_rao(identity(2), identity(3))


def _random_stochastic(rng, rows, cols):
    data = rng.integers(0, 4, size=(rows, cols))
    data[0, data.sum(axis=0) == 0] = 1
    return StochasticMatrix([[Fraction(int(v), int(s)) for v, s in zip(row, data.sum(axis=0))] for row in data])


def test_khatri_rao_columns_and_closure():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = _random_stochastic(rng, 2, 4)
        b = _random_stochastic(rng, 2, 4)
        kr = khatri_rao(a, b)
        for j in range(1, 5):
            assert kr.col(j) == tuple(np.kron(np.array(a.col(j)), np.array(b.col(j))))
        assert kr.is_stochastic()
        assert stp(a, _random_stochastic(rng, 4, 3)).is_stochastic()


def test_stochastic_matrix_rejects_bad_columns():
    with pytest.raises(ValueError):
        StochasticMatrix([[Fraction(1, 2)], [Fraction(1, 3)]])


def test_logical_round_trip_and_compose():
    m = LogicalMatrix(2, (2, 1, 1, 2))
    assert m.to_matrix().to_logical() == m
    assert str(m) == "delta2[2,1,1,2]"
    neg = LogicalMatrix(2, (2, 1))
    assert neg.compose(m) == LogicalMatrix(2, (1, 2, 2, 1))
    assert neg.compose(m).to_matrix() == neg.to_matrix() @ m.to_matrix()
