# Licensed under the MIT License.
"""
Sparse matrix and dense vector helpers shared by every module

Matrices are scipy CSR matrices and vectors are 1-D float64 numpy arrays. The functions here
enforce the invariants the rest of the package relies on: summed duplicates, no stored zeros,
finite values, and nonnegativity where normalization is involved.
"""

import logging
from typing import Iterable, Tuple

import numpy as np
import scipy.sparse as sp

from multalign.exceptions import MultalignDataError, MultalignDimensionError, MultalignDomainError


LOGGER = logging.getLogger(__name__)

Triplet = Tuple[int, int, float]


def from_triplets(n_rows: int, n_cols: int, triplets: Iterable[Triplet]) -> sp.csr_matrix:
    """
    Build a CSR matrix from (row, col, value) triplets
    Duplicate coordinates are summed and entries that sum to zero are dropped
    """

    triplets = list(triplets)
    if not triplets:
        return sp.csr_matrix((n_rows, n_cols), dtype=np.float64)

    rows = np.fromiter((t[0] for t in triplets), dtype=np.int64, count=len(triplets))
    cols = np.fromiter((t[1] for t in triplets), dtype=np.int64, count=len(triplets))
    values = np.fromiter((t[2] for t in triplets), dtype=np.float64, count=len(triplets))

    bad = (rows < 0) | (rows >= n_rows) | (cols < 0) | (cols >= n_cols) | ~np.isfinite(values)
    if bad.any():
        raise MultalignDataError(
            f"Invalid triplet {triplets[int(np.argmax(bad))]} for a {n_rows}x{n_cols} matrix"
        )

    return from_arrays(n_rows, n_cols, rows, cols, values)


def from_arrays(
    n_rows: int, n_cols: int, rows: np.ndarray, cols: np.ndarray, values: np.ndarray
) -> sp.csr_matrix:
    """
    Array form of from_triplets, indices are assumed to be in range
    """

    matrix = sp.coo_matrix(
        (np.asarray(values, dtype=np.float64), (rows, cols)), shape=(n_rows, n_cols)
    ).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    return matrix


def column_normalize(matrix: sp.spmatrix) -> sp.csr_matrix:
    """
    Divide every column by its sum
    All-zero columns stay zero, mass lost through them is handled by iterate renormalization
    """

    matrix = sp.csr_matrix(matrix, dtype=np.float64)
    if matrix.nnz and matrix.data.min() < 0:
        raise MultalignDomainError("Column normalization requires a nonnegative matrix")

    sums = np.asarray(matrix.sum(axis=0)).ravel()
    scale = np.zeros_like(sums)
    np.divide(1.0, sums, out=scale, where=sums > 0)

    normalized = matrix @ sp.diags(scale)
    normalized = sp.csr_matrix(normalized)
    normalized.eliminate_zeros()
    return normalized


def matvec(matrix: sp.spmatrix, vector: np.ndarray) -> np.ndarray:
    """
    Sparse matrix-vector product
    """

    vector = np.asarray(vector, dtype=np.float64)
    if vector.ndim != 1 or vector.shape[0] != matrix.shape[1]:
        raise MultalignDimensionError(
            f"Cannot multiply a {matrix.shape[0]}x{matrix.shape[1]} matrix "
            f"by a vector of shape {vector.shape}"
        )

    return np.asarray(matrix @ vector, dtype=np.float64).ravel()


def normalize_sum(vector: np.ndarray) -> np.ndarray:
    """
    Divide a nonnegative vector by its sum
    The zero vector is returned unchanged
    """

    vector = np.asarray(vector, dtype=np.float64)
    if vector.size and vector.min() < 0:
        raise MultalignDomainError("Cannot normalize a vector with negative entries")

    total = vector.sum()
    if total > 0:
        return vector / total

    return np.zeros_like(vector)


def entry_set(matrix: sp.spmatrix) -> set:
    """
    Stored entries as a set of (row, col, value)
    """

    coo = sp.coo_matrix(matrix)
    return set(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
