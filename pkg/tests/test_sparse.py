# Licensed under the MIT License.
"""
Tests for sparse matrix and vector helpers
"""

import numpy as np
import pytest
import scipy.sparse as sp

from multalign.exceptions import MultalignDataError, MultalignDimensionError, MultalignDomainError
from multalign.sparse import column_normalize, entry_set, from_triplets, matvec, normalize_sum


def test_duplicates_summed():
    matrix = from_triplets(2, 2, [(0, 0, 1), (0, 0, 2)])
    assert entry_set(matrix) == {(0, 0, 3.0)}


def test_empty_triplets():
    matrix = from_triplets(2, 2, [])
    assert matrix.shape == (2, 2)
    assert matrix.nnz == 0


def test_symmetric_pair():
    matrix = from_triplets(3, 3, [(0, 1, 1), (1, 0, 1)])
    assert entry_set(matrix) == entry_set(matrix.T)
    assert matrix.nnz == 2


def test_zero_sum_collision_dropped():
    matrix = from_triplets(2, 2, [(1, 1, 2.5), (1, 1, -2.5), (0, 1, 1)])
    assert entry_set(matrix) == {(0, 1, 1.0)}


@pytest.mark.parametrize(
    "triplet", [(2, 0, 1.0), (0, -1, 1.0), (0, 0, float("nan")), (0, 0, float("inf"))]
)
def test_invalid_triplet(triplet):
    with pytest.raises(MultalignDataError, match="Invalid triplet"):
        from_triplets(2, 2, [(0, 0, 1.0), triplet])


def test_order_independent(rng):
    triplets = [(int(r), int(c), float(v)) for r, c, v in rng.integers(0, 5, size=(30, 3))]
    shuffled = [triplets[i] for i in rng.permutation(len(triplets))]
    assert entry_set(from_triplets(5, 5, triplets)) == entry_set(from_triplets(5, 5, shuffled))


def test_column_normalize_split():
    matrix = from_triplets(3, 2, [(0, 0, 2), (1, 0, 2), (2, 1, 0.0)])
    normalized = column_normalize(matrix).toarray()
    np.testing.assert_array_equal(normalized[:, 0], [0.5, 0.5, 0.0])
    np.testing.assert_array_equal(normalized[:, 1], [0.0, 0.0, 0.0])


def test_column_normalize_identity():
    identity = sp.identity(4, format="csr")
    np.testing.assert_array_equal(column_normalize(identity).toarray(), np.eye(4))


def test_column_sums(rng):
    dense = rng.random((20, 20)) * (rng.random((20, 20)) < 0.2)
    dense[:, 3] = 0.0
    sums = column_normalize(sp.csr_matrix(dense)).sum(axis=0).A1
    assert np.all((np.abs(sums - 1.0) < 1e-12) | (sums == 0.0))
    assert sums[3] == 0.0


def test_column_normalize_negative():
    with pytest.raises(MultalignDomainError):
        column_normalize(from_triplets(2, 2, [(0, 0, -1.0)]))


def test_matvec():
    permutation = from_triplets(2, 2, [(0, 1, 1), (1, 0, 1)])
    np.testing.assert_array_equal(matvec(permutation, [3, 5]), [5, 3])
    np.testing.assert_array_equal(matvec(sp.identity(3), [1, 2, 3]), [1, 2, 3])
    np.testing.assert_array_equal(matvec(sp.csr_matrix((3, 2)), [1, 2]), [0, 0, 0])


def test_matvec_dense_reference(rng):
    dense = rng.random((20, 20)) * (rng.random((20, 20)) < 0.3)
    vector = rng.random(20)
    np.testing.assert_allclose(matvec(sp.csr_matrix(dense), vector), dense @ vector, atol=1e-12)


def test_matvec_dimension():
    with pytest.raises(MultalignDimensionError):
        matvec(sp.identity(3, format="csr"), [1.0, 2.0])


def test_normalize_sum():
    np.testing.assert_array_equal(normalize_sum([1, 3]), [0.25, 0.75])
    np.testing.assert_array_equal(normalize_sum([0, 0]), [0, 0])
    np.testing.assert_array_equal(normalize_sum([5]), [1])


def test_normalize_sum_negative():
    with pytest.raises(MultalignDomainError):
        normalize_sum([1.0, -0.5])
