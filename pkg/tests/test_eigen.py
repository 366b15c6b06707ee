import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dressedlat.eigen import tridiagonal_eigh, tridiagonal_eigvalsh
from dressedlat.errors import ConvergenceError


def dense(d, e):
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


@given(st.integers(1, 9).flatmap(lambda n: st.tuples(arrays(float, n, elements=finite),
                                                     arrays(float, n - 1, elements=finite))))
def test_matches_dense_eigvalsh(de):
    d, e = de
    got = tridiagonal_eigvalsh(d, e)
    ref = np.linalg.eigvalsh(dense(d, e))
    scale = max(1.0, np.abs(ref).max())
    assert np.all(np.abs(got - ref) <= 1e-12 * scale)
    assert np.all(np.diff(got) >= 0)


def test_eigenvectors_diagonalise():
    rng = np.random.default_rng(3)
    d, e = rng.normal(size=6), rng.normal(size=5)
    lam, v = tridiagonal_eigh(d, e, vectors=True)
    A = dense(d, e)
    assert np.allclose(A @ v, v * lam, atol=1e-12)
    assert np.allclose(v.T @ v, np.eye(6), atol=1e-12)


def test_diagonal_input():
    assert list(tridiagonal_eigvalsh([3.0, 1.0, 2.0], [0.0, 0.0])) == [1.0, 2.0, 3.0]


def test_iteration_cap():
    with pytest.raises(ConvergenceError):
        tridiagonal_eigvalsh([1.0, 2.0, 3.0], [1.0, 1.0], max_sweeps=0)
