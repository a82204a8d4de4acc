# Licensed under the MIT License.
"""
Exact maximum-weight bipartite matching on sparse edge sets
"""

import logging

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linear_sum_assignment
from scipy.sparse.csgraph import min_weight_full_bipartite_matching

from multalign.matching.types import Matching, WeightedEdgeList


LOGGER = logging.getLogger(__name__)


def exact_sparse_mwm(edges: WeightedEdgeList) -> Matching:
    """
    Maximum-weight matching, not necessarily perfect, over the given edges

    Every row gets a private "unmatched" column and every column a private "unmatched" row,
    and the dummies can pair with each other wherever a real edge exists. The augmented graph
    always has a perfect matching, every perfect matching uses the same number of edges, so
    shifting all weights by a constant keeps the optimum and makes every weight positive.
    Zero-weight edges never change the optimum and are dropped.
    """

    keep = edges.weights > 0
    rows, cols, weights = edges.rows[keep], edges.cols[keep], edges.weights[keep]
    if not len(weights):
        return Matching.empty(edges.shape)

    row_ids, row_local = np.unique(rows, return_inverse=True)
    col_ids, col_local = np.unique(cols, return_inverse=True)
    n_rows, n_cols = len(row_ids), len(col_ids)
    row_range, col_range = np.arange(n_rows), np.arange(n_cols)

    graph = sp.csr_matrix(
        (
            np.concatenate(
                (1.0 + weights / weights.max(), np.ones(n_rows + n_cols + len(weights)))
            ),
            (
                np.concatenate((row_local, row_range, n_rows + col_range, n_rows + col_local)),
                np.concatenate((col_local, n_cols + row_range, col_range, n_cols + row_local)),
            ),
        ),
        shape=(n_rows + n_cols, n_cols + n_rows),
    )
    LOGGER.debug(
        "Exact matching on %d edges between %d rows and %d columns", len(weights), n_rows, n_cols
    )

    matched_rows, matched_cols = min_weight_full_bipartite_matching(graph, maximize=True)
    real = (matched_rows < n_rows) & (matched_cols < n_cols)

    return Matching(row_ids[matched_rows[real]], col_ids[matched_cols[real]], edges.shape)


def exact_dense_mwm(weights: np.ndarray) -> Matching:
    """
    Maximum-weight assignment on a dense nonnegative matrix
    """

    rows, cols = linear_sum_assignment(weights, maximize=True)
    return Matching(rows, cols, weights.shape)
